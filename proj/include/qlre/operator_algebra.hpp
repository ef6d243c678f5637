#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlre::ops {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using SparseOperator = Eigen::SparseMatrix<cplx>;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(Letter l);
Letter letter_from_char(char c);

// Sparse Pauli string: (site, letter) pairs sorted by site, identities omitted.
struct PauliString {
  std::vector<std::pair<std::uint32_t, Letter>> letters;

  PauliString() = default;
  explicit PauliString(std::vector<std::pair<std::uint32_t, Letter>> l);
  static PauliString single(std::uint32_t site, Letter l);
  static PauliString from_dense(const std::string& s);  // "XIZY", site 0 first

  bool is_identity() const { return letters.empty(); }
  Letter at(std::uint32_t site) const;
  std::uint32_t max_site() const;
  std::size_t weight() const { return letters.size(); }
  std::string to_dense(int n) const;
  bool commutes_with(const PauliString& o) const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;
};

struct PauliTerm {
  cplx coefficient{1.0, 0.0};
  PauliString letters;
};

// Product a*b of single Pauli terms, phase tracked exactly.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

class OperatorSum {
 public:
  static constexpr double kMergeTol = 1e-14;

  OperatorSum() = default;
  explicit OperatorSum(int site_count) : n_(site_count) {}
  OperatorSum(int site_count, const std::vector<PauliTerm>& terms);

  static OperatorSum identity(int n, cplx c = 1.0);
  static OperatorSum pauli(int n, const PauliString& p, cplx c = 1.0);
  static OperatorSum single(int n, std::uint32_t site, Letter l, cplx c = 1.0);

  int site_count() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  OperatorSum operator+(const OperatorSum& o) const;
  OperatorSum operator-(const OperatorSum& o) const;
  OperatorSum operator*(const OperatorSum& o) const;
  OperatorSum operator*(cplx s) const;
  OperatorSum dagger() const;
  cplx coefficient_of(const PauliString& p) const;
  bool is_hermitian(double tol = 1e-12) const;

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;  // canonical: sorted by letters, merged, no zeros
};

inline OperatorSum operator*(cplx s, const OperatorSum& a) { return a * s; }

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);
OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b);
double norm_bound(const OperatorSum& a);

DenseOperator to_dense(const OperatorSum& a);
SparseOperator to_sparse(const OperatorSum& a);
DenseOperator pauli_dense(const PauliString& p, int n);
// Tr(a * rho) without materializing a.
cplx expectation(const OperatorSum& a, const DenseOperator& rho);
// Base-4 index of a string, site 0 most significant; letters I,X,Y,Z -> 0..3.
std::uint64_t pauli_index(const PauliString& p, int n);
PauliString pauli_from_index(std::uint64_t idx, int n);

// Clifford tableau: rows 0..n-1 are images of X_q, rows n..2n-1 images of Z_q.
// Each row is (x bits | z bits) with a sign bit; Y is encoded as x=z=1.
class CliffordTableau {
 public:
  CliffordTableau() = default;
  explicit CliffordTableau(int n);  // identity

  static CliffordTableau identity(int n) { return CliffordTableau(n); }
  static CliffordTableau hadamard(int n, int qubit);
  static CliffordTableau hadamard_all(int n);
  static CliffordTableau phase(int n, int qubit);
  static CliffordTableau cnot(int n, int control, int target);

  int width() const { return n_; }
  int bit(int row, int col) const { return bits_[row][col]; }
  int sign(int row) const { return signs_[row]; }
  void set_row(int row, const std::vector<std::uint8_t>& bits, int sign);

  PauliTerm image_of_row(int row) const;
  PauliTerm conjugate(const PauliTerm& p) const;
  bool is_symplectic() const;
  // Apply this tableau after `first` (result = this ∘ first).
  CliffordTableau after(const CliffordTableau& first) const;

  bool operator==(const CliffordTableau&) const = default;

 private:
  int n_ = 0;
  std::vector<std::vector<std::uint8_t>> bits_;
  std::vector<std::uint8_t> signs_;
};

OperatorSum conjugate_by_clifford(const CliffordTableau& t, const OperatorSum& a);
OperatorSum conjugate_by_T(int qubit, const OperatorSum& a);
CliffordTableau random_clifford(int n, std::uint64_t seed);

int symplectic_product(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, int n);

struct FermionMode {
  enum class Kind { create, annihilate };
  int index = 0;
  Kind kind = Kind::annihilate;
};

inline FermionMode cdag(int i) { return {i, FermionMode::Kind::create}; }
inline FermionMode cann(int i) { return {i, FermionMode::Kind::annihilate}; }

// Product of fermion operators in the given order, mapped with
// c_j -> Z_0...Z_{j-1} (X_j + iY_j)/2.
OperatorSum jordan_wigner(const std::vector<FermionMode>& product, int n_modes);

}  // namespace qlre::ops
