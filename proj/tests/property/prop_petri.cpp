#include <gtest/gtest.h>

#include "gen.hpp"
#include "scenetest/petri.hpp"

using namespace scenetest;

namespace {

// Random well-formed net: places reachable from P0 by construction.
NetSpec random_net(gen::Gen& g) {
  const int n = g.integer(1, 8);
  NetSpec spec = gen::cycle_net(n);
  const int extra = g.integer(0, 6);
  for (int i = 0; i < extra; ++i) {
    const auto from = spec.places[std::size_t(g.integer(0, n - 1))];
    const auto to = spec.places[std::size_t(g.integer(0, n - 1))];
    spec.transitions.push_back({"X" + std::to_string(i), {from}, {to}, {"any", {}}, {"in_bounds", {}}});
  }
  return spec;
}

Scene tiny() {
  Scene s;
  s.bounds = {{0, 0, 0}, {1, 1, 1}};
  return s;
}

}  // namespace

TEST(PetriProperty, TokenConservationUnderRandomFirings) {
  gen::Gen g(17);
  for (int trial = 0; trial < 300; ++trial) {
    const PetriNet net = build_net(random_net(g));
    Marking m = net.initial_marking();
    ASSERT_EQ(m.total(), 1u);
    for (int k = 0; k < 50; ++k) {
      const auto en = enabled(net, m);
      ASSERT_FALSE(en.empty()) << "a one-token cycle net never deadlocks";
      const Marking next = fire(net, m, en[std::size_t(g.integer(0, int(en.size()) - 1))]);
      EXPECT_EQ(next.total(), 1u);
      m = next;
    }
  }
}

TEST(PetriProperty, ExactlyOneTransitionPerStep) {
  gen::Gen g(18);
  const Scene s = tiny();
  const auto snap = snapshot(s);
  const VerifyContext ctx{s.expected, &snap, {LocationScope::oracle, "p"}, "p#0"};
  InteractionEvent e;
  e.kind = InteractionKind::teleport;
  for (int trial = 0; trial < 200; ++trial) {
    const PetriNet net = build_net(random_net(g));
    Marking m = net.initial_marking();
    for (int k = 0; k < 20; ++k) {
      const auto r = step(net, m, e, snap, OracleRegistry::builtin(), ctx);
      ASSERT_TRUE(r.fired);
      // The fired transition is the first enabled one, and only its token moved.
      EXPECT_EQ(*r.fired, enabled(net, m).front());
      EXPECT_EQ(r.marking, fire(net, m, *r.fired));
      std::size_t changed = 0;
      for (std::size_t p = 0; p < m.tokens.size(); ++p) changed += m.tokens[p] != r.marking.tokens[p];
      EXPECT_LE(changed, 2u);
      m = r.marking;
    }
  }
}

TEST(PetriProperty, CycleReturnsHomeAfterNFirings) {
  const Scene s = tiny();
  const auto snap = snapshot(s);
  const VerifyContext ctx{s.expected, &snap, {LocationScope::oracle, "p"}, "p#0"};
  InteractionEvent e;
  e.kind = InteractionKind::teleport;
  for (const int n : {1, 2, 3, 7}) {
    const PetriNet net = build_net(gen::cycle_net(n));
    Marking m = net.initial_marking();
    for (int k = 1; k <= n; ++k) {
      m = step(net, m, e, snap, OracleRegistry::builtin(), ctx).marking;
      if (k < n) {
        EXPECT_NE(m, net.initial_marking()) << "n=" << n << " k=" << k;
      }
    }
    EXPECT_EQ(m, net.initial_marking()) << "n=" << n;
  }
}

TEST(PetriProperty, JsonRoundTripOfRandomNets) {
  gen::Gen g(19);
  for (int i = 0; i < 200; ++i) {
    const NetSpec spec = random_net(g);
    EXPECT_EQ(parse_net_spec(to_json(spec)), spec);
    EXPECT_EQ(parse_net_spec(to_json(spec).dump()), spec);
  }
}
