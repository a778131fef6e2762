#pragma once

/// Shared utilities for the unit and acceptance suites: deterministic random
/// generators, frame-cell tensor construction, scratch directories, and the
/// standard instance list that identity/cross-check suites loop over.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/degeneracy.hpp"

namespace vsi_test {

using namespace vsi;

/// Frame position of the boost partner: l<I> <-> n<I>, m<i> -> itself.
inline int partner(const NullFrame& fr, int pos) {
  FrameRole r = fr.roles[static_cast<std::size_t>(pos)];
  FrameRole::Kind want = r.kind == FrameRole::Kind::L   ? FrameRole::Kind::N
                         : r.kind == FrameRole::Kind::N ? FrameRole::Kind::L
                                                        : FrameRole::Kind::M;
  for (std::size_t a = 0; a < fr.roles.size(); ++a)
    if (fr.roles[a].kind == want && fr.roles[a].index == r.index) return static_cast<int>(a);
  throw ValidationError("frame lacks the partner role");
}

/// Covariant tensor whose frame components are exactly the given cells:
/// T = sum of c * (x)_s lowered(vector[partner(idx_s)]).  The partner swap
/// makes each lowered vector pair to 1 against the intended frame vector and
/// to 0 against every other one.
inline Tensor tensor_from_cells(const NullFrame& fr, const Metric& g, int rank,
                                const std::vector<std::pair<std::vector<int>, Rational>>& cells) {
  Tensor acc = Tensor::zeros(g.ctx, g.dim, down_valence(rank));
  for (const auto& [idx, c] : cells) {
    Tensor term = lower_slot(fr.vectors[static_cast<std::size_t>(partner(fr, idx[0]))], 0, g);
    for (int s = 1; s < rank; ++s)
      term = tensor_product(
          term, lower_slot(fr.vectors[static_cast<std::size_t>(partner(fr, idx[s]))], 0, g));
    for (std::size_t f = 0; f < term.comp.size(); ++f)
      acc.comp[f] = acc.comp[f] + term.comp[f].scaled(c);
  }
  return acc;
}

inline Rational rand_rational(std::mt19937_64& rng, int num_range = 5, int den_range = 3) {
  std::uniform_int_distribution<int> num(-num_range, num_range);
  std::uniform_int_distribution<int> den(1, den_range);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational rand_nonzero_rational(std::mt19937_64& rng, int num_range = 5,
                                      int den_range = 3) {
  for (;;) {
    Rational q = rand_rational(rng, num_range, den_range);
    if (q != 0) return q;
  }
}

/// Random cells for a rank-r tensor over a dim-d frame.
inline std::vector<std::pair<std::vector<int>, Rational>> rand_cells(std::mt19937_64& rng,
                                                                     int rank, int dim,
                                                                     int count) {
  std::uniform_int_distribution<int> pos(0, dim - 1);
  std::vector<std::pair<std::vector<int>, Rational>> cells;
  for (int i = 0; i < count; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(rank));
    for (auto& v : idx) v = pos(rng);
    cells.push_back({std::move(idx), rand_nonzero_rational(rng)});
  }
  return cells;
}

/// Random k x k integer matrix with determinant +-1, built as a product of
/// elementary row operations applied to the identity.
inline std::vector<std::vector<long long>> rand_unimodular(std::mt19937_64& rng, int k,
                                                           int ops = 8) {
  std::vector<std::vector<long long>> u(static_cast<std::size_t>(k),
                                        std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (int i = 0; i < k; ++i) u[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  std::uniform_int_distribution<int> row(0, k - 1);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int t = 0; t < ops; ++t) {
    int i = row(rng), j = row(rng);
    switch (kind(rng)) {
      case 0: {  // row_i += c * row_j
        if (i == j) break;
        long long c = coeff(rng);
        for (int s = 0; s < k; ++s)
          u[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] +=
              c * u[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
        break;
      }
      case 1:
        std::swap(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
        break;
      default:
        for (int s = 0; s < k; ++s) u[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] *= -1;
        break;
    }
  }
  return u;
}

inline SupportSet apply_transform(const std::vector<std::vector<long long>>& u,
                                  const SupportSet& s) {
  SupportSet out;
  const int k = static_cast<int>(u.size());
  for (const auto& b : s) {
    BoostWeight nb(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
      long long acc = 0;
      for (int j = 0; j < k; ++j)
        acc += u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               b[static_cast<std::size_t>(j)];
      nb[static_cast<std::size_t>(i)] = static_cast<int>(acc);
    }
    out.insert(std::move(nb));
  }
  return out;
}

/// Unique scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path = std::filesystem::temp_directory_path() /
           ("vsi_test_" + std::to_string(static_cast<unsigned long long>(stamp)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct NamedInstance {
  std::string tag;
  FamilyInstance inst;
  int order;  ///< stack order the suites build for this instance
};

/// The instances the identity, classification and cross-check suites run on:
/// one representative per catalog family, including both transverse signs of
/// the spacelike/timelike family and a curvature-generic member.
inline std::vector<NamedInstance> standard_instances() {
  std::vector<NamedInstance> out;
  out.push_back({"flat4", make_builtin("flat4", {}), 2});
  out.push_back({"vsi3", make_builtin("vsi3", {}), 4});
  out.push_back({"vsi1not2", make_builtin("vsi1not2", {}), 2});
  out.push_back({"walker-quad",
                 make_builtin("walker-general", {{"A", "2*v^2+3*V^2+5*v*V"},
                                                 {"B", "29*v^2+31*V^2+37*v*V"},
                                                 {"C", "67*v^2"}}),
                 2});
  out.push_back({"cond1",
                 make_builtin("walker-cond",
                              {{"tier", "1"},
                               {"A1", "u+U"},
                               {"A2", "u*U+1"},
                               {"A0", "u^2"},
                               {"B1", "v^2*(u+1)+v*U+u"},
                               {"B0", "v^5+v*u+U"},
                               {"C1", "v^3*U+v^2*u+v+1"},
                               {"C2", "u+2*U"},
                               {"C0", "U^2"}}),
                 2});
  out.push_back({"cond2",
                 make_builtin("walker-cond", {{"tier", "2"},
                                              {"A1", "u"},
                                              {"A2", "U+1"},
                                              {"B11", "1"},
                                              {"B0", "v^4+v*u"},
                                              {"C11", "u"},
                                              {"C2", "1"}}),
                 2});
  out.push_back({"cond3",
                 make_builtin("walker-cond", {{"tier", "3"}, {"B11", "U"}, {"C2", "u"}}), 2});
  out.push_back({"kundt-null",
                 make_builtin("kundt-null", {{"W1U", "u"},
                                             {"W0U", "V^2+u*U"},
                                             {"W0V", "V*u"},
                                             {"H1", "V+u"},
                                             {"H0", "V^3+U"}}),
                 2});
  out.push_back({"kundt-st0",
                 make_builtin("kundt-st", {{"eps", "0"},
                                           {"W0T", "T+X^2"},
                                           {"W0X", "u*X"},
                                           {"H1", "T*X"},
                                           {"H0", "X^3+T"}}),
                 2});
  out.push_back({"kundt-st1",
                 make_builtin("kundt-st", {{"eps", "1"},
                                           {"W0T", "T+X^2"},
                                           {"W0X", "u*X"},
                                           {"H1", "T*X"},
                                           {"H0", "X^3+T"}}),
                 2});
  out.push_back({"sixd", make_builtin("sixd", {}), 2});
  return out;
}

}  // namespace vsi_test
