#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "dcq/error_analysis.hpp"
#include "dcq/group.hpp"

using namespace dcq;

namespace {

std::vector<std::string> cycle_names(const CayleyGraph& g, const std::vector<int>& cycle,
                                     const GroupRepresentation& rep) {
  std::vector<std::string> out;
  for (int e : cycle) out.push_back(rep.generator_names[static_cast<size_t>(g.edges[static_cast<size_t>(e)].gen)]);
  return out;
}

}  // namespace

TEST_CASE("Cayley graph of Z2 with one generator: 2 vertices, 2 edges") {
  DecouplingGroup g = DecouplingGroup::z2_power(1);
  CayleyGraph cg = build_cayley_graph(g);
  CHECK(g.order() == 2);
  CHECK(cg.edges.size() == 2);
}

TEST_CASE("Cayley graph of Z2xZ2 with two generators: 4 vertices, 8 edges, balanced") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  CayleyGraph cg = build_cayley_graph(g);
  CHECK(g.order() == 4);
  CHECK(cg.edges.size() == 8);
  std::vector<int> out_deg(4, 0), in_deg(4, 0);
  for (const auto& e : cg.edges) {
    out_deg[static_cast<size_t>(e.from)]++;
    in_deg[static_cast<size_t>(e.to)]++;
  }
  for (int v = 0; v < 4; ++v) {
    CHECK(out_deg[static_cast<size_t>(v)] == 2);
    CHECK(in_deg[static_cast<size_t>(v)] == 2);
  }
}

TEST_CASE("generators that do not generate the group are rejected") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  g.generators = {g.generators[0]};  // only one of the two Z2 factors reachable
  CHECK_THROWS(build_cayley_graph(g));
}

TEST_CASE("canonical Eulerian cycle on Z2xZ2 reads X,Y,X,Y,Y,X,Y,X") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  GroupRepresentation rep = rep_z2z2_collective(2);
  CayleyGraph cg = build_cayley_graph(g);
  std::vector<int> cycle = find_eulerian_cycle(cg);
  CHECK(cycle_names(cg, cycle, rep) ==
        std::vector<std::string>{"X", "Y", "X", "Y", "Y", "X", "Y", "X"});
}

TEST_CASE("canonical Eulerian cycle on Z2 reads X,X") {
  DecouplingGroup g = DecouplingGroup::z2_power(1);
  GroupRepresentation rep = rep_z2_collective(1);
  CayleyGraph cg = build_cayley_graph(g);
  std::vector<int> cycle = find_eulerian_cycle(cg);
  CHECK(cycle_names(cg, cycle, rep) == std::vector<std::string>{"X", "X"});
}

TEST_CASE("Eulerian cycles use every edge exactly once and close at the identity") {
  for (int k : {1, 2, 4}) {
    DecouplingGroup g = DecouplingGroup::z2_power(k);
    CayleyGraph cg = build_cayley_graph(g);
    for (unsigned seed : {0u, 1u, 7u}) {
      std::vector<int> cycle =
          seed == 0 ? find_eulerian_cycle(cg) : find_eulerian_cycle_randomized(cg, seed);
      REQUIRE(cycle.size() == cg.edges.size());
      std::vector<int> sorted = cycle;
      std::sort(sorted.begin(), sorted.end());
      for (size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == static_cast<int>(i));
      // walk the edges in application order, checking continuity and closure
      int at = 0;
      for (int e : cycle) {
        CHECK(cg.edges[static_cast<size_t>(e)].from == at);
        at = cg.edges[static_cast<size_t>(e)].to;
      }
      CHECK(at == 0);
    }
  }
}

TEST_CASE("synthesize_edd emits d*m generator tokens, each generator d times") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  SequenceSpec edd = synthesize_edd(g, rep_z2z2_collective(2));
  REQUIRE(edd.tokens.size() == 8);
  std::map<std::string, int> counts;
  for (const auto& t : edd.tokens) {
    CHECK(t.role == Role::Generator);
    CHECK(t.duration_mult == 1);
    counts[t.name]++;
  }
  CHECK(counts["X"] == 4);
  CHECK(counts["Y"] == 4);
  CHECK(edd.total_duration_mult() == 8);

  SequenceSpec edd_z = synthesize_edd(DecouplingGroup::z2_power(1), rep_z2_collective(1));
  CHECK(edd_z.tokens.size() == 2);
  CHECK(edd_z.total_duration_mult() == 2);
}

TEST_CASE("synthesize_dcg for the four-element group matches the published 12-token string") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  SequenceSpec dcg = synthesize_dcg(g, rep_z2z2_collective(2), "Q");
  CHECK(dcg.names() == std::vector<std::string>{"X", "I_Q", "Y", "I_Q", "X", "I_Q", "Y", "Y", "X",
                                                "Y", "X", "Q_half"});
  CHECK(dcg.total_duration_mult() == 16);
  CHECK(dcg.tokens.size() == 12);  // d*m + d = 8 + 4
}

TEST_CASE("synthesize_dcg for Z2 matches the dephasing sequence with duration 6") {
  SequenceSpec dcg = synthesize_dcg(DecouplingGroup::z2_power(1), rep_z2_collective(1), "Q");
  CHECK(dcg.names() == std::vector<std::string>{"X", "I_Q", "X", "Q_half"});
  CHECK(dcg.total_duration_mult() == 6);
}

TEST_CASE("projection superoperator on Z2: anticommuting probes vanish, commuting double") {
  JointSpace sp(1, 1);
  GroupRepresentation rep = rep_z2_collective(1);
  DecouplingGroup g = DecouplingGroup::z2_power(1);
  rep.elements.resize(2);  // {I, X}
  Mat z = PauliString::single(1, 1, 'Z').matrix();
  Mat x = PauliString::single(1, 1, 'X').matrix();
  CHECK(operator_norm(projection_superop(sp, rep, z)) < 1e-14);
  CHECK(operator_norm(Mat(projection_superop(sp, rep, x) - 2.0 * x)) < 1e-14);
}

TEST_CASE("four-element collective group averages away all single-qubit couplings") {
  std::mt19937_64 rng(7);
  JointSpace sp(2, 4);
  GroupRepresentation rep = rep_z2z2_collective(2);
  for (int qubit : {1, 2})
    for (char a : {'X', 'Y', 'Z'}) {
      Mat e = kron(PauliString::single(2, qubit, a).matrix(), random_hermitian(rng, 4));
      Mat avg = projection_superop(sp, rep, e);
      // independent oracle: the explicit four-term sum
      Mat oracle = Mat::Zero(sp.dim(), sp.dim());
      for (const auto& el : rep.elements) {
        Mat u = embed_system(sp, el.matrix());
        oracle += u.adjoint() * e * u;
      }
      CHECK(operator_norm(Mat(avg - oracle)) < 1e-12);
      CHECK(operator_norm(mod_b_reduce(sp, avg)) < 1e-12);
    }
}

TEST_CASE("the collective average also kills inhomogeneous bilinear couplings") {
  std::mt19937_64 rng(13);
  JointSpace sp(2, 2);
  GroupRepresentation rep = rep_z2z2_collective(2);
  for (char a : {'X', 'Y', 'Z'})
    for (char b : {'X', 'Y', 'Z'}) {
      if (a == b) continue;
      Mat pat = (PauliString::single(2, 1, a) * PauliString::single(2, 2, b)).matrix();
      Mat e = kron(pat, random_hermitian(rng, 2));
      CHECK(operator_norm(mod_b_reduce(sp, projection_superop(sp, rep, e))) < 1e-11);
    }
}

TEST_CASE("representations are projective homomorphisms") {
  CHECK(rep_z2_collective(2).is_projective_homomorphism(DecouplingGroup::z2_power(1)));
  CHECK(rep_z2z2_collective(2).is_projective_homomorphism(DecouplingGroup::z2_power(2)));
}

TEST_CASE("sequence text round-trip preserves tokens") {
  SequenceSpec dcg = synthesize_dcg(DecouplingGroup::z2_power(2), rep_z2z2_collective(2), "Q");
  SequenceSpec back = SequenceSpec::from_text(dcg.to_text());
  REQUIRE(back.tokens.size() == dcg.tokens.size());
  for (size_t i = 0; i < back.tokens.size(); ++i) {
    CHECK(back.tokens[i].role == dcg.tokens[i].role);
    CHECK(back.tokens[i].name == dcg.tokens[i].name);
    CHECK(back.tokens[i].duration_mult == dcg.tokens[i].duration_mult);
  }
  CHECK(!dcg.to_json().empty());
}

TEST_CASE("dcg on a randomized traversal still has the arm/duration structure") {
  DecouplingGroup g = DecouplingGroup::z2_power(2);
  GroupRepresentation rep = rep_z2z2_collective(2);
  CayleyGraph cg = build_cayley_graph(g);
  SequenceSpec alt = synthesize_dcg_on_cycle(cg, rep, find_eulerian_cycle_randomized(cg, 5), "Q");
  CHECK(alt.tokens.size() == 12);
  CHECK(alt.total_duration_mult() == 16);
  int arms = 0, halves = 0;
  for (const auto& t : alt.tokens) {
    arms += t.role == Role::IdentityArm;
    halves += t.role == Role::QHalf;
  }
  CHECK(arms == 3);
  CHECK(halves == 1);
}
