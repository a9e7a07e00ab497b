#include "dcq/group.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dcq {

DecouplingGroup DecouplingGroup::z2_power(int k) {
  if (k < 0 || k > 16) throw std::invalid_argument("z2_power: bad exponent");
  DecouplingGroup g;
  const int d = 1 << k;
  g.labels.resize(d);
  g.mult.assign(d, std::vector<int>(d));
  for (int a = 0; a < d; ++a) {
    std::string bits;
    for (int j = 0; j < k; ++j) bits += ((a >> j) & 1) ? '1' : '0';
    g.labels[a] = bits;
    for (int b = 0; b < d; ++b) g.mult[a][b] = a ^ b;
  }
  for (int j = 0; j < k; ++j) g.generators.push_back(1 << j);
  return g;
}

bool GroupRepresentation::is_projective_homomorphism(const DecouplingGroup& group,
                                                     double tol) const {
  const int d = group.order();
  if (static_cast<int>(elements.size()) != d) return false;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      PauliString prod = elements[a] * elements[b];
      const PauliString& target = elements[group.mult[a][b]];
      if (prod.labels != target.labels) return false;
      double ratio = std::abs(std::abs(prod.coeff / target.coeff) - 1.0);
      if (ratio > tol) return false;
    }
  return true;
}

GroupRepresentation rep_z2_collective(int n) {
  GroupRepresentation rep;
  rep.elements = {PauliString::identity(n), PauliString(std::string(n, 'X'))};
  rep.generator_names = {"X"};
  return rep;
}

GroupRepresentation rep_z2z2_collective(int n) {
  // Element bits (b0, b1): b0 -> X^all, b1 -> Y^all, applied in that order.
  GroupRepresentation rep;
  PauliString id = PauliString::identity(n);
  PauliString x(std::string(n, 'X')), y(std::string(n, 'Y'));
  rep.elements = {id, x, y, y * x};
  rep.generator_names = {"X", "Y"};
  return rep;
}

CayleyGraph build_cayley_graph(const DecouplingGroup& group) {
  CayleyGraph graph;
  graph.group = &group;
  const int d = group.order();
  for (int v = 0; v < d; ++v)
    for (size_t j = 0; j < group.generators.size(); ++j)
      graph.edges.push_back({v, group.mult[group.generators[j]][v], static_cast<int>(j)});
  // Reachability from the identity along generator edges.
  std::vector<char> seen(d, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int g : group.generators) {
      int w = group.mult[g][v];
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (int v = 0; v < d; ++v)
    if (!seen[v])
      throw std::invalid_argument("build_cayley_graph: generators do not generate the group (" +
                                  group.labels[v] + " unreachable)");
  return graph;
}

namespace {

// Hierholzer with a pluggable tie-break among the unused out-edges of a vertex.
std::vector<int> eulerian_cycle_impl(
    const CayleyGraph& graph,
    const std::function<int(const std::vector<int>&, int)>& pick) {
  const int m = graph.n_generators();
  const int d = graph.group->order();
  // out_edges[v][j] = edge index of generator j at vertex v.
  std::vector<std::vector<int>> out_edges(d, std::vector<int>(m, -1));
  for (size_t e = 0; e < graph.edges.size(); ++e)
    out_edges[graph.edges[e].from][graph.edges[e].gen] = static_cast<int>(e);
  std::vector<char> used(graph.edges.size(), 0);

  auto walk = [&](int start, int prev_gen, std::vector<int>& out) {
    int v = start;
    for (;;) {
      std::vector<int> avail;
      for (int j = 0; j < m; ++j)
        if (out_edges[v][j] >= 0 && !used[out_edges[v][j]]) avail.push_back(j);
      if (avail.empty()) break;
      int j = pick(avail, prev_gen);
      int e = out_edges[v][j];
      used[e] = 1;
      out.push_back(e);
      prev_gen = j;
      v = graph.edges[e].to;
    }
    return v;
  };

  std::vector<int> cycle;
  if (walk(0, -1, cycle) != 0)
    throw std::invalid_argument("find_eulerian_cycle: graph is not balanced");
  // Splice in subcycles at vertices that still have unused edges.
  for (;;) {
    bool spliced = false;
    for (size_t pos = 0; pos < cycle.size(); ++pos) {
      int v = graph.edges[cycle[pos]].from;
      bool has_unused = false;
      for (int j = 0; j < m; ++j)
        if (out_edges[v][j] >= 0 && !used[out_edges[v][j]]) has_unused = true;
      if (!has_unused) continue;
      std::vector<int> sub;
      int prev_gen = pos == 0 ? -1 : graph.edges[cycle[pos - 1]].gen;
      if (walk(v, prev_gen, sub) != v)
        throw std::invalid_argument("find_eulerian_cycle: graph is not balanced");
      cycle.insert(cycle.begin() + static_cast<long>(pos), sub.begin(), sub.end());
      spliced = true;
      break;
    }
    if (!spliced) break;
  }
  if (cycle.size() != graph.edges.size())
    throw std::invalid_argument("find_eulerian_cycle: graph is disconnected");
  return cycle;
}

}  // namespace

std::vector<int> find_eulerian_cycle(const CayleyGraph& graph) {
  return eulerian_cycle_impl(graph, [](const std::vector<int>& avail, int prev) {
    for (int j : avail)
      if (j != prev) return j;
    return avail.front();
  });
}

std::vector<int> find_eulerian_cycle_randomized(const CayleyGraph& graph, unsigned seed) {
  auto rng = std::make_shared<std::mt19937>(seed);
  return eulerian_cycle_impl(graph, [rng](const std::vector<int>& avail, int) {
    return avail[(*rng)() % avail.size()];
  });
}

int SequenceSpec::total_duration_mult() const {
  int t = 0;
  for (const auto& tok : tokens) t += tok.duration_mult;
  return t;
}

std::vector<std::string> SequenceSpec::names() const {
  std::vector<std::string> out;
  for (const auto& tok : tokens) out.push_back(tok.name);
  return out;
}

namespace {
const char* role_name(Role r) {
  switch (r) {
    case Role::Generator: return "generator";
    case Role::IdentityArm: return "identity_arm";
    case Role::QHalf: return "q_half";
    case Role::Q: return "q";
    case Role::Free: return "free";
  }
  return "?";
}
Role role_from_name(const std::string& s) {
  if (s == "generator") return Role::Generator;
  if (s == "identity_arm") return Role::IdentityArm;
  if (s == "q_half") return Role::QHalf;
  if (s == "q") return Role::Q;
  if (s == "free") return Role::Free;
  throw std::invalid_argument("unknown role: " + s);
}
}  // namespace

std::string SequenceSpec::to_text() const {
  std::ostringstream os;
  for (const auto& tok : tokens)
    os << role_name(tok.role) << ":" << tok.name << ":" << tok.duration_mult << "\n";
  return os.str();
}

std::string SequenceSpec::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& tok : tokens)
    arr.push_back({{"role", role_name(tok.role)},
                   {"token", tok.name},
                   {"duration_multiplier", tok.duration_mult}});
  nlohmann::json j = {{"tokens", arr}, {"total_duration_multiplier", total_duration_mult()}};
  return j.dump(2);
}

SequenceSpec SequenceSpec::from_text(const std::string& text) {
  SequenceSpec spec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto p1 = line.find(':');
    auto p2 = line.rfind(':');
    if (p1 == std::string::npos || p2 == p1)
      throw std::invalid_argument("SequenceSpec: malformed line: " + line);
    Token tok;
    tok.role = role_from_name(line.substr(0, p1));
    tok.name = line.substr(p1 + 1, p2 - p1 - 1);
    tok.duration_mult = std::stoi(line.substr(p2 + 1));
    spec.tokens.push_back(tok);
  }
  return spec;
}

SequenceSpec synthesize_edd(const DecouplingGroup& group, const GroupRepresentation& rep) {
  SequenceSpec spec;
  if (group.generators.empty()) return spec;
  CayleyGraph graph = build_cayley_graph(group);
  for (int e : find_eulerian_cycle(graph)) {
    int j = graph.edges[e].gen;
    spec.tokens.push_back({Role::Generator, rep.generator_names[j], 1, j});
  }
  return spec;
}

SequenceSpec synthesize_dcg_on_cycle(const CayleyGraph& graph, const GroupRepresentation& rep,
                                     const std::vector<int>& cycle, const std::string& q_name) {
  if (q_name.empty()) throw std::invalid_argument("synthesize_dcg: Q token undefined");
  SequenceSpec spec;
  std::vector<char> visited(graph.group->order(), 0);
  visited[0] = 1;
  for (int e : cycle) {
    int j = graph.edges[e].gen;
    spec.tokens.push_back({Role::Generator, rep.generator_names[j], 1, j});
    int v = graph.edges[e].to;
    if (!visited[v]) {
      visited[v] = 1;
      spec.tokens.push_back({Role::IdentityArm, "I_" + q_name, 2, -1});
    }
  }
  spec.tokens.push_back({Role::QHalf, q_name + "_half", 2, -1});
  return spec;
}

SequenceSpec synthesize_dcg(const DecouplingGroup& group, const GroupRepresentation& rep,
                            const std::string& q_name) {
  CayleyGraph graph = build_cayley_graph(group);
  return synthesize_dcg_on_cycle(graph, rep, find_eulerian_cycle(graph), q_name);
}

Mat projection_superop(const JointSpace& space, const GroupRepresentation& rep, const Mat& e) {
  if (e.rows() != space.dim() || e.cols() != space.dim())
    throw std::invalid_argument("projection_superop: dimension mismatch");
  Mat out = Mat::Zero(space.dim(), space.dim());
  for (const auto& g : rep.elements) {
    Mat gm = embed_system(space, g.matrix());
    out += gm.adjoint() * e * gm;
  }
  return out;
}

}  // namespace dcq
