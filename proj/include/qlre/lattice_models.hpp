#pragma once

#include <array>
#include <vector>

#include "qlre/operator_algebra.hpp"

namespace qlre::models {

using ops::OperatorSum;

// Ising-type lattice of Co chains: periodic Lx x Ly x Lz, J1 along the chain
// axis, J2/J3 to the six triangular in-plane neighbours one chain step away.
struct CaLattice {
  int Lx = 9, Ly = 9, Lz = 25;
  double J1 = -1.0;
  double J23 = 0.1;

  struct Bond {
    int a, b;
    double J;
    int group;  // 0 = J1, 1 = J2/J3
  };

  int site_count() const { return Lx * Ly * Lz; }
  int index(int x, int y, int z) const;
  std::array<int, 3> coords(int site) const;
  std::vector<Bond> bonds() const;
  // Neighbours of a site as (site, J, group), coordination 14 on the full lattice.
  std::vector<Bond> neighbours(int site) const;
  int coordination() const { return 14; }

  OperatorSum hz(double h_long = 0.0) const;
  OperatorSum hx(double h_tf) const;
  // Unshared per-spin coupling sum: every bond counted from both ends.
  double per_spin_coupling_sum() const;

  // Rate classes of a spin flip: distinct (S1, S2) neighbour sums over the
  // J1 and J2/J3 groups, enumerated over all 2^14 neighbour configurations.
  int rate_class_count(int site = 0) const;
  // Distinct flip energies among those classes at longitudinal field h.
  int distinct_flip_energy_count(int site = 0, double h_long = 0.0) const;
};

// A finite patch of the Ca lattice with induced (open) bonds.
struct CaPatch {
  int n = 0;
  std::vector<CaLattice::Bond> bonds;  // local indices
  std::vector<int> lattice_sites;

  static CaPatch from_sites(const CaLattice& lat, const std::vector<int>& sites);
  static CaPatch chain(const CaLattice& lat, int length);
  OperatorSum hz(double h_long = 0.0) const;
  double energy(unsigned config, double h_long = 0.0) const;  // bit (n-1-q) set: spin q down (|1>)
};

// Field/temperature protocol for the Ca magnet: longitudinal field stepped up
// in equal increments at fixed transverse field. The beta values are
// placeholders (flagged non-authoritative) and meant to be overridden.
struct CaSchedule {
  std::vector<double> h_long;
  std::vector<double> beta;
  double h_tf = 1.0 / 300.0;
  bool beta_authoritative = false;

  static CaSchedule defaults(int steps = 10, double h_max = 1.4, double beta = 1.0);
  int steps() const { return static_cast<int>(h_long.size()); }
  void validate() const;
};

struct HubbardLattice {
  int Lx = 10, Ly = 10;
  double t = 1.0;
  double t_nnn = 0.15;
  double U = 20.0 / 3.0;

  int sites() const { return Lx * Ly; }
  int modes() const { return 2 * sites(); }
  // Row-major sites, spin-up block followed by spin-down block.
  int site(int x, int y) const { return y * Lx + x; }
  int mode(int x, int y, int spin) const { return site(x, y) + spin * sites(); }

  struct Hop {
    int a, b;
    double t;
  };
  std::vector<Hop> hops() const;
  OperatorSum hamiltonian() const;
  OperatorSum hopping_term(const Hop& h, int spin) const;
  OperatorSum number(int x, int y, int spin) const;
  std::vector<std::array<int, 2>> left_edge() const;
  std::vector<std::array<int, 2>> right_edge() const;
  double mean_edge_string_length() const;
};

OperatorSum tfim_hamiltonian(int n, double J = -1.0, double h = -1.0);

}  // namespace qlre::models
