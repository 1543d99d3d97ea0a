// Regenerates catalog/*.grp: every group of the catalog orders as permutation generators.
//
//   make_catalog <output-dir>

#include <groupeq/abelian_solver.hpp>
#include <groupeq/catalog.hpp>
#include <groupeq/constructions.hpp>
#include <groupeq/enumerate.hpp>
#include <groupeq/group_io.hpp>
#include <groupeq/isomorphism.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace groupeq;

namespace {

const std::vector<std::size_t> kOrders{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 12, 18, 20, 24, 28, 30, 36, 40, 42};

// Invariant-factor lists d1 | d2 | ... with product n.
void invariant_factors(std::size_t n, std::size_t divides, std::vector<std::uint64_t>& cur,
                       std::vector<std::vector<std::uint64_t>>& out) {
  if (n == 1) {
    out.emplace_back(cur.rbegin(), cur.rend());
    return;
  }
  for (std::size_t d = 2; d <= n; ++d)
    if (n % d == 0 && (divides == 0 || divides % d == 0)) {
      cur.push_back(d);
      invariant_factors(n / d, d, cur, out);
      cur.pop_back();
    }
}

struct Named {
  std::string name;
  FiniteGroup group;
};

std::vector<Named> abelian_groups(std::size_t n) {
  std::vector<std::vector<std::uint64_t>> lists;
  std::vector<std::uint64_t> cur;
  invariant_factors(n, 0, cur, lists);
  std::vector<Named> out;
  for (const auto& l : lists) {
    std::string name;
    for (auto d : l) name += (name.empty() ? "C" : "xC") + std::to_string(d);
    out.push_back({name.empty() ? "C1" : name, abelian_group(l)});
  }
  return out;
}

std::vector<Named> named_nonabelian() {
  std::vector<Named> out;
  for (std::size_t k = 3; k <= 21; ++k) out.push_back({"D" + std::to_string(2 * k), dihedral(k)});
  out.push_back({"Q8", dicyclic(2)});
  for (std::size_t k = 3; k <= 10; ++k) out.push_back({"Dic" + std::to_string(k), dicyclic(k)});
  out.push_back({"A4", alternating_group(4)});
  out.push_back({"S4", symmetric_group(4)});
  out.push_back({"AGL1_5", affine_group_over_prime_field(5)});
  out.push_back({"AGL1_7", affine_group_over_prime_field(7)});
  return out;
}

std::string name_for(const FiniteGroup& g, const std::vector<Named>& bases) {
  const std::size_t n = g.order();
  for (const auto& a : abelian_groups(n))
    if (isomorphic(g, a.group, n)) return a.name;
  for (const auto& h : bases) {
    if (n % h.group.order() != 0) continue;
    for (const auto& a : abelian_groups(n / h.group.order())) {
      if (a.group.order() == 1) {
        if (isomorphic(g, h.group, n)) return h.name;
        continue;
      }
      if (isomorphic(g, direct_product(h.group, a.group), n)) return h.name + "x" + a.name;
    }
  }
  for (const auto& h : bases)
    for (const auto& k : bases)
      if (h.group.order() * k.group.order() == n && h.name <= k.name &&
          isomorphic(g, direct_product(h.group, k.group), n))
        return h.name + "x" + k.name;
  return g.name();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_catalog <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const auto bases = named_nonabelian();
  for (std::size_t n : kOrders) {
    auto groups = enumerate_groups(n, 59);
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const auto& g = groups[k];
      const std::string name = name_for(g, bases);
      const auto gens = permutation_representation(g);
      char prefix[32];
      std::snprintf(prefix, sizeof prefix, "%02zu_%02zu_", n, k + 1);
      const auto path = dir / (prefix + name + ".grp");
      std::string text = "# " + name + ": order " + std::to_string(n) + ", degree " +
                         std::to_string(gens.empty() ? 1 : gens[0].degree()) + "\n" +
                         write_group_generators(name, n, gens);
      std::ofstream(path) << text;
      auto back = load_group_file(path.string());
      if (!isomorphic(back, g, n)) {
        std::cerr << path << ": permutation representation is not faithful\n";
        return 1;
      }
      std::cout << path.filename().string() << "\n";
    }
  }
  return 0;
}
