#include <algorithm>
#include <numeric>
#include <set>

#include "tg/errors.hpp"
#include "tg/group.hpp"

namespace tg {

namespace {

GenSpec rooted(const std::string& name, Perm p) {
  GenSpec g;
  g.name = name;
  g.root = std::move(p);
  return g;
}

GenSpec recursive(const std::string& name, std::vector<Entry> entries, const std::string& root_name = "") {
  GenSpec g;
  g.name = name;
  g.recursive = true;
  g.entries = std::move(entries);
  g.root_name = root_name;
  return g;
}

Perm cycle_perm(int m) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(m));
  std::iota(c.begin(), c.end(), 0u);
  return Perm::from_cycles(static_cast<std::size_t>(m), {c});
}

std::optional<std::pair<int, int>> prime_power(int m) {
  for (int p = 2; p <= m; ++p) {
    if (m % p) continue;
    int n = 0, x = m;
    while (x % p == 0) {
      x /= p;
      ++n;
    }
    if (x != 1) return std::nullopt;
    return std::make_pair(p, n);
  }
  return std::nullopt;
}

}  // namespace

Group from_ggs(int m, const std::vector<int>& e, const std::string& name, const std::string& directed) {
  if (m < 2) throw ValidationError("GGS arity must be at least 2");
  if (static_cast<int>(e.size()) != m - 1) throw ValidationError("GGS vector must have m-1 entries");
  int g = m;
  for (int x : e) g = std::gcd(g, ((x % m) + m) % m);
  if (g != 1) throw ValidationError("GGS vector violates gcd(e_1,...,e_{m-1},m) = 1");
  GroupSpec spec;
  if (name.empty()) {
    spec.name = "GGS(" + std::to_string(m) + ";";
    for (std::size_t i = 0; i < e.size(); ++i) spec.name += (i ? "," : "") + std::to_string(e[i]);
    spec.name += ")";
  } else {
    spec.name = name;
  }
  spec.shape = TreeShape::regular(m);
  spec.flavor = Flavor::GGSVector;
  LayerSpec layer;
  layer.gens.push_back(rooted("a", cycle_perm(m)));
  std::vector<Entry> entries;
  for (int x : e) {
    int k = ((x % m) + m) % m;
    entries.push_back(k ? Entry{"a", k} : Entry{"", 1});
  }
  entries.push_back({directed, 1});
  layer.gens.push_back(recursive(directed, std::move(entries)));
  layer.families = {{directed}};
  spec.layers = {layer};
  if (auto pp = prime_power(m)) spec.prime = pp->first;
  return Group(std::move(spec));
}

Group grigorchuk_2group(const std::string& cycle, const std::string& prefix, const std::string& name) {
  if (cycle.empty()) throw ValidationError("defining sequence needs a nonempty cycle");
  for (char s : {'0', '1', '2'})
    if (cycle.find(s) == std::string::npos)
      throw ValidationError(std::string("symbol ") + s + " does not recur in the defining sequence");
  const std::string seq = prefix + cycle;
  for (char c : seq)
    if (c < '0' || c > '2') throw ValidationError("defining sequence uses symbols other than 0, 1, 2");
  // omega_s kills exactly one of b, c, d
  static const char* kernel = "dcb";
  GroupSpec spec;
  spec.name = name.empty() ? "G_" + (prefix.empty() ? "" : prefix + "|") + cycle : name;
  spec.shape = TreeShape::regular(2);
  spec.flavor = Flavor::GGSequence;
  spec.prime = 2;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    LayerSpec layer;
    layer.gens.push_back(rooted("a", Perm::from_cycles(2, {{0, 1}})));
    char killed = kernel[seq[k] - '0'];
    for (const char* x : {"b", "c", "d"}) {
      Entry first = x[0] == killed ? Entry{"", 1} : Entry{"a", 1};
      layer.gens.push_back(recursive(x, {first, {x, 1}}));
    }
    layer.families = {{"b", "c", "d"}};
    spec.layers.push_back(layer);
    spec.next_layer.push_back(static_cast<std::uint32_t>(k + 1 < seq.size() ? k + 1 : prefix.size()));
  }
  return Group(std::move(spec));
}

Group gupta_sidki(int p) {
  auto pp = prime_power(p);
  if (!pp || pp->second != 1 || p < 3) throw ValidationError("Gupta-Sidki groups need an odd prime");
  std::vector<int> e(static_cast<std::size_t>(p - 1), 0);
  e[0] = 1;
  e[1] = -1;
  return from_ggs(p, e, "GS" + std::to_string(p));
}

bool is_ggs_torsion(int m, const std::vector<int>& e) {
  auto pp = prime_power(m);
  if (!pp) throw ValidationError("torsion criterion needs a prime power arity");
  if (static_cast<int>(e.size()) != m - 1) throw ValidationError("GGS vector must have m-1 entries");
  auto [p, n] = *pp;
  int pk = 1;
  for (int k = 0; k < n; ++k) {
    long long sum = 0;
    for (int s = pk; s < m; s += pk) sum += e[static_cast<std::size_t>(s - 1)];
    long long mod = static_cast<long long>(pk) * p;
    if (((sum % mod) + mod) % mod != 0) return false;
    pk *= p;
  }
  return true;
}

Group from_triple(const DefiningTriple& t) {
  const TreeShape& sh = t.shape;
  if (t.a_gens.size() != static_cast<std::size_t>(sh.phase_count()))
    throw ValidationError("A must be given for every phase of the tree");
  const std::size_t nb = t.b_names.size();
  if (nb < 2 || t.b_table.size() != nb) throw ValidationError("B needs a square multiplication table");
  for (const auto& row : t.b_table) {
    if (row.size() != nb) throw ValidationError("B needs a square multiplication table");
    for (auto x : row)
      if (x >= nb) throw ValidationError("B table entry out of range");
  }
  if (t.omega.size() <= t.omega_prefix) throw ValidationError("omega needs a nonempty periodic part");
  const std::size_t ocycle = t.omega.size() - t.omega_prefix;

  // spherical transitivity
  std::vector<std::vector<Perm>> a_elems;
  for (int ph = 0; ph < sh.phase_count(); ++ph) {
    auto m = static_cast<std::size_t>(sh.arity_of_phase(ph));
    for (const auto& p : t.a_gens[static_cast<std::size_t>(ph)])
      if (p.degree() != m) throw ShapeMismatch("A generator degree does not match the arity");
    if (!is_transitive(t.a_gens[static_cast<std::size_t>(ph)], m))
      throw ValidationError("spherical transitivity fails: A is not transitive at phase " + std::to_string(ph));
    a_elems.push_back(perm_closure(t.a_gens[static_cast<std::size_t>(ph)], m));
  }

  const std::size_t pre = std::max(sh.prefix().size(), t.omega_prefix);
  const std::size_t cyc = std::lcm(sh.cycle().size(), ocycle);
  const std::size_t levels = pre + cyc;
  auto omega_at = [&](std::size_t level) -> const std::vector<std::vector<Perm>>& {
    return t.omega[level < t.omega_prefix ? level : t.omega_prefix + (level - t.omega_prefix) % ocycle];
  };

  // omega data: homomorphisms into A of the next level, kernels meet trivially on the cycle
  for (std::size_t lv = 0; lv < levels; ++lv) {
    const auto& om = omega_at(lv);
    const int m = sh.arity(lv);
    const int m1 = sh.arity(lv + 1);
    if (om.size() != static_cast<std::size_t>(m - 1)) throw ValidationError("omega needs m-1 maps per level");
    for (const auto& w : om) {
      if (w.size() != nb) throw ValidationError("omega map must list an image for every element of B");
      for (std::size_t x = 0; x < nb; ++x) {
        if (w[x].degree() != static_cast<std::size_t>(m1)) throw ShapeMismatch("omega image has wrong degree");
        const auto& an = a_elems[static_cast<std::size_t>(sh.phase_of_level(lv + 1))];
        if (std::find(an.begin(), an.end(), w[x]) == an.end())
          throw ValidationError("omega image outside A at level " + std::to_string(lv + 1));
        for (std::size_t y = 0; y < nb; ++y)
          if (!(w[x] * w[y] == w[t.b_table[x][y]])) throw ValidationError("omega is not a homomorphism");
      }
    }
  }
  for (std::size_t x = 1; x < nb; ++x) {
    bool in_all = true;
    for (std::size_t lv = pre; lv < levels && in_all; ++lv)
      for (const auto& w : omega_at(lv))
        if (!w[x].is_identity()) in_all = false;
    if (in_all) throw ValidationError("strong kernel intersection fails: " + t.b_names[x] + " lies in every kernel");
  }

  GroupSpec spec;
  spec.name = t.name;
  spec.shape = sh;
  spec.flavor = Flavor::SpinalTriple;
  for (std::size_t lv = 0; lv < levels; ++lv) {
    LayerSpec layer;
    layer.phase = sh.phase_of_level(lv);
    const auto& ag = t.a_gens[static_cast<std::size_t>(layer.phase)];
    for (std::size_t i = 0; i < ag.size(); ++i)
      layer.gens.push_back(rooted(ag.size() == 1 ? "a" : "a" + std::to_string(i + 1), ag[i]));
    spec.layers.push_back(layer);
    spec.next_layer.push_back(static_cast<std::uint32_t>(lv + 1 < levels ? lv + 1 : pre));
  }
  // the rooted word for a permutation of the next level: a single power if possible, else an extra name
  auto rooted_entry = [&](std::size_t layer_idx, const Perm& p) -> Entry {
    if (p.is_identity()) return {"", 1};
    auto& gens = spec.layers[layer_idx].gens;
    for (const auto& g : gens) {
      if (g.recursive) continue;
      Perm acc(p.degree());
      for (int k = 1; k <= 64; ++k) {
        acc *= g.root;
        if (acc == p) return {g.name, k};
        if (acc.is_identity()) break;
      }
    }
    std::string n = "r" + std::to_string(gens.size());
    gens.push_back(rooted(n, p));
    return {n, 1};
  };
  std::vector<std::string> directed;
  for (auto bi : t.b_gens) {
    if (bi == 0 || bi >= nb) throw ValidationError("directed generator must be a nontrivial element of B");
    directed.push_back(t.b_names[bi]);
  }
  for (std::size_t lv = 0; lv < levels; ++lv) {
    const auto& om = omega_at(lv);
    std::size_t nl = spec.next_layer[lv];
    for (auto bi : t.b_gens) {
      std::vector<Entry> entries;
      for (const auto& w : om) entries.push_back(rooted_entry(nl, w[bi]));
      entries.push_back({t.b_names[bi], 1});
      spec.layers[lv].gens.push_back(recursive(t.b_names[bi], std::move(entries)));
    }
    spec.layers[lv].families = {directed};
  }
  const auto& a0 = t.a_gens[static_cast<std::size_t>(spec.layers[0].phase)];
  for (std::size_t i = 0; i < a0.size(); ++i) spec.generators.push_back(spec.layers[0].gens[i].name);
  spec.generators.insert(spec.generators.end(), directed.begin(), directed.end());
  return Group(std::move(spec));
}

Group builtin(const std::string& name) {
  if (name == "Gg") {
    GroupSpec spec;
    spec.name = "Gg";
    spec.flavor = Flavor::GGSequence;
    spec.prime = 2;
    LayerSpec l;
    l.gens = {rooted("a", Perm::from_cycles(2, {{0, 1}})), recursive("b", {{"a", 1}, {"c", 1}}),
              recursive("c", {{"a", 1}, {"d", 1}}), recursive("d", {{"", 1}, {"b", 1}})};
    l.families = {{"b", "c", "d"}};
    spec.layers = {l};
    return Group(std::move(spec));
  }
  if (name == "Sg") {
    GroupSpec spec;
    spec.name = "Sg";
    spec.flavor = Flavor::ExplicitRecursion;
    spec.prime = 2;
    LayerSpec l;
    l.gens = {rooted("a", Perm::from_cycles(2, {{0, 1}})), recursive("b", {{"a", 1}, {"c", 1}}),
              recursive("c", {{"", 1}, {"d", 1}}), recursive("d", {{"", 1}, {"b", 1}})};
    l.families = {{"b", "c", "d"}};
    spec.layers = {l};
    return Group(std::move(spec));
  }
  if (name == "BSV") {
    GroupSpec spec;
    spec.name = "BSV";
    spec.flavor = Flavor::ExplicitRecursion;
    LayerSpec l;
    l.gens = {rooted("a", Perm::from_cycles(2, {{0, 1}})), recursive("mu", {{"", 1}, {"mu", -1}}, "a"),
              recursive("tau", {{"", 1}, {"tau", 1}}, "a")};
    spec.layers = {l};
    spec.generators = {"tau", "mu"};
    spec.prime = 2;
    return Group(std::move(spec));
  }
  if (name == "FGg") return from_ggs(3, {1, 0}, "FGg");
  if (name == "BGg") return from_ggs(3, {1, 1}, "BGg");
  if (name == "GSg") return from_ggs(3, {1, 2}, "GSg");
  if (name == "G2") return from_ggs(4, {1, 0, 1}, "G2", "b");
  if (name == "Dinf") return from_ggs(2, {1}, "Dinf", "b");
  if (name == "GS3") return gupta_sidki(3);
  if (name == "GS5") return gupta_sidki(5);
  throw ValidationError("unknown builtin group '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"Gg", "G2", "FGg", "BGg", "GSg", "Sg", "BSV", "Dinf", "GS3", "GS5"};
}

}  // namespace tg
