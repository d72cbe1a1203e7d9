#pragma once

// Compact Lie algebras given by structure constants, an invariant inner
// product and a faithful anti-Hermitian matrix representation.

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <memory>
#include <string>
#include <vector>

namespace liekahler {

/// A point a of the affine space A_g, in basis coordinates.
struct AlgebraPoint {
  Eigen::VectorXd coords;

  AlgebraPoint() = default;
  explicit AlgebraPoint(Eigen::VectorXd c) : coords(std::move(c)) {}

  static AlgebraPoint zero(int n) { return AlgebraPoint(Eigen::VectorXd::Zero(n)); }
  static AlgebraPoint basis(int n, int i) {
    return AlgebraPoint(Eigen::VectorXd::Unit(n, i));
  }

  int dim() const { return static_cast<int>(coords.size()); }
  bool finite() const { return coords.allFinite(); }

  AlgebraPoint operator+(const AlgebraPoint& o) const { return AlgebraPoint(coords + o.coords); }
  AlgebraPoint operator-(const AlgebraPoint& o) const { return AlgebraPoint(coords - o.coords); }
  AlgebraPoint operator-() const { return AlgebraPoint(-coords); }
  friend AlgebraPoint operator*(double s, const AlgebraPoint& p) { return AlgebraPoint(s * p.coords); }
};

/// An element of G^C, held in the chosen matrix representation.
/// `real_form` is true when the element lies in G (unitary).
struct GroupElement {
  Eigen::MatrixXcd matrix;
  bool real_form = false;

  static GroupElement identity(int m) {
    return {Eigen::MatrixXcd::Identity(m, m), true};
  }
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& o) const {
    return {matrix * o.matrix, real_form && o.real_form};
  }
};

/// Immutable description of a compact Lie algebra g.
///
/// [e_i, e_j] = sum_k C[i][j][k] e_k; `gram` is the ad-invariant inner
/// product "."; `rep_basis[i]` is the anti-Hermitian image of e_i.
/// The constructor validates antisymmetry, Jacobi, ad-invariance of the gram
/// matrix and compatibility of the representation with the bracket.
class LieAlgebraSpec {
 public:
  LieAlgebraSpec(std::string name, int dim, std::vector<double> structure_constants,
                 Eigen::MatrixXd gram, std::vector<Eigen::MatrixXcd> rep_basis);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int rep_dim() const { return rep_dim_; }

  double structure_constant(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }
  const std::vector<double>& structure_constants() const { return c_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Lower Cholesky factor L of the gram matrix, gram = L L^T.
  const Eigen::MatrixXd& gram_factor() const { return gram_l_; }
  const Eigen::MatrixXd& gram_inverse() const { return gram_inv_; }
  const std::vector<Eigen::MatrixXcd>& rep_basis() const { return rep_; }

  /// Largest Jacobi-identity violation over basis triples.
  double jacobi_residual() const;
  /// Largest violation of [X,Y].Z + Y.[X,Z] = 0 over basis triples.
  double invariance_residual() const;
  /// Largest violation of [rho_i, rho_j] = sum_k C_ijk rho_k.
  double rep_residual() const;

  /// Real coordinates x with sum_k x_k rho_k closest to M (least squares).
  Eigen::VectorXd coordinates_of(const Eigen::MatrixXcd& m) const;

 private:
  std::string name_;
  int dim_;
  int rep_dim_;
  std::vector<double> c_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd gram_l_;
  Eigen::MatrixXd gram_inv_;
  std::vector<Eigen::MatrixXcd> rep_;
  Eigen::LDLT<Eigen::MatrixXd> rep_normal_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebraSpec>;

/// Shipped algebras. su(2) and so(3) use [e1,e2] = e3 cyclically; su(3) uses
/// the anti-Hermitian Gell-Mann basis e_k = -(i/2) lambda_k. All have gram = Id.
AlgebraPtr su2();
AlgebraPtr so3();
AlgebraPtr su3();
/// u(1)^n: abelian, rep_basis[k] = i E_kk.
AlgebraPtr abelian(int n);
/// Look up a shipped algebra by name ("su2", "so3", "su3", "u1^N").
AlgebraPtr algebra_by_name(const std::string& name);

/// Parse {"name","dim","structure_constants","gram","rep_basis"}.
AlgebraPtr algebra_from_json(const std::string& json_text);
std::string algebra_to_json(const LieAlgebraSpec& spec);

// Inner-product helpers (all in gram coordinates).
double dot(const LieAlgebraSpec& g, const AlgebraPoint& x, const AlgebraPoint& y);
double norm(const LieAlgebraSpec& g, const AlgebraPoint& x);
/// The adjointness isomorphism g -> g*: covector components gram * x.
Eigen::VectorXd sharp(const LieAlgebraSpec& g, const AlgebraPoint& x);

AlgebraPoint bracket(const LieAlgebraSpec& g, const AlgebraPoint& x, const AlgebraPoint& y);
/// The bracket of g-bar under the identification g = g-bar: -[x, y].
AlgebraPoint opposite_bracket(const LieAlgebraSpec& g, const AlgebraPoint& x,
                              const AlgebraPoint& y);
/// Column j is [a, e_j].
Eigen::MatrixXd ad_matrix(const LieAlgebraSpec& g, const AlgebraPoint& a);
/// B(a)_{ij} = a.[e_i, e_j].
Eigen::MatrixXd bracket_pairing(const LieAlgebraSpec& g, const AlgebraPoint& a);

/// sum_k x_k rho_k.
Eigen::MatrixXcd represent(const LieAlgebraSpec& g, const AlgebraPoint& x);
/// sum_k (re_k + i im_k) rho_k.
Eigen::MatrixXcd represent(const LieAlgebraSpec& g, const AlgebraPoint& re,
                           const AlgebraPoint& im);

/// Ad_z a, for z in G.
AlgebraPoint adjoint_action(const LieAlgebraSpec& g, const GroupElement& z,
                            const AlgebraPoint& a);

struct ExpOptions {
  double norm_bound = 50.0;
};

/// exp(sum (re_k + i im_k) rho_k) by scaling and squaring with Pade.
GroupElement exp_c(const LieAlgebraSpec& g, const AlgebraPoint& re, const AlgebraPoint& im,
                   ExpOptions opts = {});
/// Same exponential by eigendecomposition. Only defined when one of re, im is
/// zero (the exponent is then anti-Hermitian or Hermitian).
GroupElement exp_c_spectral(const LieAlgebraSpec& g, const AlgebraPoint& re,
                            const AlgebraPoint& im, ExpOptions opts = {});

/// Polar decomposition g = u exp(i a') of an element of G^C.
struct PolarDecomposition {
  GroupElement unitary;
  AlgebraPoint fiber;
};
PolarDecomposition polar_decompose(const LieAlgebraSpec& g, const GroupElement& x);

/// ||M M^* - Id||_F.
double unitarity_residual(const Eigen::MatrixXcd& m);

void require_same_dim(const LieAlgebraSpec& g, const AlgebraPoint& x, const char* what);

}  // namespace liekahler
