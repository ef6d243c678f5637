#include "qlre/lattice_models.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qlre::models {

using ops::cplx;
using ops::Letter;
using ops::PauliString;
using ops::PauliTerm;

namespace {
// Triangular in-plane displacements, one of each +/- pair.
constexpr int kTri[3][2] = {{1, 0}, {0, 1}, {1, 1}};

int wrap(int v, int L) { return ((v % L) + L) % L; }
}  // namespace

int CaLattice::index(int x, int y, int z) const {
  return (wrap(z, Lz) * Ly + wrap(y, Ly)) * Lx + wrap(x, Lx);
}

std::array<int, 3> CaLattice::coords(int s) const {
  return {s % Lx, (s / Lx) % Ly, s / (Lx * Ly)};
}

std::vector<CaLattice::Bond> CaLattice::bonds() const {
  std::vector<Bond> out;
  for (int s = 0; s < site_count(); ++s) {
    auto [x, y, z] = coords(s);
    out.push_back({s, index(x, y, z + 1), J1, 0});
    for (auto& d : kTri) {
      out.push_back({s, index(x + d[0], y + d[1], z + 1), J23, 1});
      out.push_back({s, index(x - d[0], y - d[1], z + 1), J23, 1});
    }
  }
  return out;
}

std::vector<CaLattice::Bond> CaLattice::neighbours(int s) const {
  auto [x, y, z] = coords(s);
  std::vector<Bond> out;
  for (int dz : {1, -1}) {
    out.push_back({s, index(x, y, z + dz), J1, 0});
    for (auto& d : kTri) {
      out.push_back({s, index(x + d[0], y + d[1], z + dz), J23, 1});
      out.push_back({s, index(x - d[0], y - d[1], z + dz), J23, 1});
    }
  }
  return out;
}

OperatorSum CaLattice::hz(double h_long) const {
  const int n = site_count();
  std::vector<PauliTerm> terms;
  for (auto& b : bonds()) terms.push_back({b.J, PauliString({{b.a, Letter::Z}, {b.b, Letter::Z}})});
  if (h_long != 0.0)
    for (int s = 0; s < n; ++s) terms.push_back({h_long, PauliString::single(s, Letter::Z)});
  return OperatorSum(n, terms);
}

OperatorSum CaLattice::hx(double h_tf) const {
  const int n = site_count();
  std::vector<PauliTerm> terms;
  for (int s = 0; s < n; ++s) terms.push_back({h_tf, PauliString::single(s, Letter::X)});
  return OperatorSum(n, terms);
}

double CaLattice::per_spin_coupling_sum() const {
  double s = 0.0;
  for (int i = 0; i < site_count(); ++i)
    for (auto& b : neighbours(i)) s += std::abs(b.J);
  return s;
}

namespace {
template <class F>
void for_each_neighbour_sum(const CaLattice& lat, int site, F&& f) {
  auto nb = lat.neighbours(site);
  const unsigned configs = 1U << nb.size();
  for (unsigned c = 0; c < configs; ++c) {
    int s1 = 0, s2 = 0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      int s = ((c >> k) & 1U) ? -1 : 1;
      (nb[k].group == 0 ? s1 : s2) += s;
    }
    f(s1, s2);
  }
}
}  // namespace

int CaLattice::rate_class_count(int site) const {
  std::set<std::pair<int, int>> keys;
  for_each_neighbour_sum(*this, site, [&](int s1, int s2) { keys.insert({s1, s2}); });
  return static_cast<int>(keys.size());
}

int CaLattice::distinct_flip_energy_count(int site, double h_long) const {
  std::set<long long> keys;
  for_each_neighbour_sum(*this, site, [&](int s1, int s2) {
    double de = 2.0 * std::abs(J1 * s1 + J23 * s2 + h_long);
    keys.insert(std::llround(de * 1e9));
  });
  return static_cast<int>(keys.size());
}

CaPatch CaPatch::from_sites(const CaLattice& lat, const std::vector<int>& sites) {
  CaPatch p;
  p.n = static_cast<int>(sites.size());
  p.lattice_sites = sites;
  for (auto& b : lat.bonds()) {
    auto ia = std::find(sites.begin(), sites.end(), b.a);
    auto ib = std::find(sites.begin(), sites.end(), b.b);
    if (ia != sites.end() && ib != sites.end())
      p.bonds.push_back({static_cast<int>(ia - sites.begin()), static_cast<int>(ib - sites.begin()), b.J, b.group});
  }
  return p;
}

CaPatch CaPatch::chain(const CaLattice& lat, int length) {
  if (length < 1 || length >= lat.Lz) throw std::invalid_argument("CaPatch::chain: length");
  std::vector<int> sites;
  for (int z = 0; z < length; ++z) sites.push_back(lat.index(0, 0, z));
  return from_sites(lat, sites);
}

OperatorSum CaPatch::hz(double h_long) const {
  std::vector<PauliTerm> terms;
  for (auto& b : bonds)
    terms.push_back({b.J, PauliString({{static_cast<std::uint32_t>(b.a), Letter::Z},
                                       {static_cast<std::uint32_t>(b.b), Letter::Z}})});
  if (h_long != 0.0)
    for (int q = 0; q < n; ++q) terms.push_back({h_long, PauliString::single(q, Letter::Z)});
  return OperatorSum(n, terms);
}

double CaPatch::energy(unsigned config, double h_long) const {
  auto spin = [&](int q) { return ((config >> (n - 1 - q)) & 1U) ? -1.0 : 1.0; };
  double e = 0.0;
  for (auto& b : bonds) e += b.J * spin(b.a) * spin(b.b);
  for (int q = 0; q < n; ++q) e += h_long * spin(q);
  return e;
}

std::vector<HubbardLattice::Hop> HubbardLattice::hops() const {
  std::vector<Hop> out;
  for (int y = 0; y < Ly; ++y)
    for (int x = 0; x < Lx; ++x) {
      if (x + 1 < Lx) out.push_back({site(x, y), site(x + 1, y), t});
      if (y + 1 < Ly) out.push_back({site(x, y), site(x, y + 1), t});
    }
  for (int y = 0; y < Ly; ++y)
    for (int x = 0; x + 1 < Lx; ++x) {
      if (y + 1 < Ly) out.push_back({site(x, y), site(x + 1, y + 1), t_nnn});
      if (y - 1 >= 0) out.push_back({site(x, y), site(x + 1, y - 1), t_nnn});
    }
  return out;
}

OperatorSum HubbardLattice::hopping_term(const Hop& h, int spin) const {
  using ops::cann;
  using ops::cdag;
  const int a = h.a + spin * sites(), b = h.b + spin * sites();
  auto fwd = ops::jordan_wigner({cdag(a), cann(b)}, modes());
  auto bwd = ops::jordan_wigner({cdag(b), cann(a)}, modes());
  return (fwd + bwd) * cplx(-h.t);
}

OperatorSum HubbardLattice::number(int x, int y, int spin) const {
  const int m = mode(x, y, spin);
  return ops::jordan_wigner({ops::cdag(m), ops::cann(m)}, modes());
}

OperatorSum HubbardLattice::hamiltonian() const {
  std::vector<PauliTerm> terms;
  auto append = [&](const OperatorSum& a) { terms.insert(terms.end(), a.terms().begin(), a.terms().end()); };
  for (auto& hop : hops())
    for (int s = 0; s < 2; ++s) append(hopping_term(hop, s));
  for (int y = 0; y < Ly; ++y)
    for (int x = 0; x < Lx; ++x) append(number(x, y, 0) * number(x, y, 1) * cplx(U));
  return OperatorSum(modes(), terms);
}

std::vector<std::array<int, 2>> HubbardLattice::left_edge() const {
  std::vector<std::array<int, 2>> out;
  for (int y = 0; y < Ly; ++y) out.push_back({0, y});
  return out;
}

std::vector<std::array<int, 2>> HubbardLattice::right_edge() const {
  std::vector<std::array<int, 2>> out;
  for (int y = 0; y < Ly; ++y) out.push_back({Lx - 1, y});
  return out;
}

double HubbardLattice::mean_edge_string_length() const {
  double total = 0.0;
  int count = 0;
  for (auto& e : left_edge())
    for (int s = 0; s < 2; ++s) { total += mode(e[0], e[1], s); ++count; }
  for (auto& e : right_edge())
    for (int s = 0; s < 2; ++s) { total += mode(e[0], e[1], s); ++count; }
  return total / count;
}

CaSchedule CaSchedule::defaults(int steps, double h_max, double beta) {
  if (steps < 1) throw std::invalid_argument("CaSchedule: steps >= 1");
  CaSchedule s;
  for (int k = 1; k <= steps; ++k) s.h_long.push_back(h_max * k / steps);
  s.beta.assign(steps, beta);
  return s;
}

void CaSchedule::validate() const {
  if (h_long.empty() || h_long.size() != beta.size()) throw std::invalid_argument("CaSchedule: one beta per field step");
  for (double b : beta)
    if (!(b >= 0)) throw std::invalid_argument("CaSchedule: beta >= 0");
  if (!(h_tf >= 0)) throw std::invalid_argument("CaSchedule: h_tf >= 0");
}

OperatorSum tfim_hamiltonian(int n, double J, double h) {
  std::vector<PauliTerm> terms;
  for (int i = 0; i + 1 < n; ++i)
    terms.push_back({J, PauliString({{static_cast<std::uint32_t>(i), Letter::Z},
                                     {static_cast<std::uint32_t>(i + 1), Letter::Z}})});
  for (int i = 0; i < n; ++i) terms.push_back({h, PauliString::single(i, Letter::X)});
  return OperatorSum(n, terms);
}

}  // namespace qlre::models
