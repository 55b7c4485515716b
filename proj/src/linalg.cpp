#include "qwork/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qwork {

double max_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

double hermiticity_defect(const Matrix& a) {
  return max_norm(a - a.adjoint());
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "dimension mismatch in multiply: " << a.rows() << "x" << a.cols()
        << " * " << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
  return a * b;
}

Matrix adjoint(const Matrix& a) { return a.adjoint(); }

Complex trace(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("trace requires a square matrix");
  }
  return a.trace();
}

HermitianOperator::HermitianOperator(Matrix a, double tol_scale)
    : mat_(std::move(a)) {
  if (mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("HermitianOperator requires a square matrix");
  }
  if (!all_finite(mat_)) {
    throw std::invalid_argument("HermitianOperator entries must be finite");
  }
  const double defect = hermiticity_defect(mat_);
  const double bound = tol_scale * (1.0 + max_norm(mat_));
  if (defect > bound) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: defect " << defect << " exceeds " << bound;
    throw std::invalid_argument(msg.str());
  }
}

UnitaryOperator::UnitaryOperator(Matrix u, double tol) : mat_(std::move(u)) {
  if (mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("UnitaryOperator requires a square matrix");
  }
  defect_ = max_norm(mat_.adjoint() * mat_ -
                     Matrix::Identity(mat_.rows(), mat_.cols()));
  if (!(defect_ <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: defect " << defect_ << " exceeds " << tol;
    throw std::invalid_argument(msg.str());
  }
}

UnitaryOperator UnitaryOperator::identity(Eigen::Index dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim));
}

SpectralDecomposition::SpectralDecomposition(std::vector<double> eigenvalues,
                                             std::vector<int> multiplicities,
                                             Matrix basis)
    : eigenvalues_(std::move(eigenvalues)),
      multiplicities_(std::move(multiplicities)),
      basis_(std::move(basis)) {
  if (eigenvalues_.size() != multiplicities_.size()) {
    throw std::invalid_argument("eigenvalue/multiplicity size mismatch");
  }
  offsets_.reserve(eigenvalues_.size() + 1);
  int off = 0;
  for (int m : multiplicities_) {
    offsets_.push_back(off);
    off += m;
  }
  offsets_.push_back(off);
  if (off != basis_.cols() || basis_.rows() != basis_.cols()) {
    throw std::invalid_argument("basis shape inconsistent with multiplicities");
  }
}

Matrix SpectralDecomposition::projector(int group) const {
  const auto block =
      basis_.middleCols(offsets_[group], multiplicities_[group]);
  return block * block.adjoint();
}

double SpectralDecomposition::state_eigenvalue(int k) const {
  return eigenvalues_[group_of_state(k)];
}

int SpectralDecomposition::group_of_state(int k) const {
  for (int g = 0; g < groups(); ++g) {
    if (k < offsets_[g + 1]) return g;
  }
  throw std::out_of_range("state index out of range");
}

Matrix SpectralDecomposition::reconstruct() const {
  Vector scale(dim());
  for (int g = 0; g < groups(); ++g) {
    for (int k = offsets_[g]; k < offsets_[g + 1]; ++k) {
      scale(k) = eigenvalues_[g];
    }
  }
  return basis_ * scale.asDiagonal() * basis_.adjoint();
}

namespace {

// Deterministic orthonormal basis of the subspace spanned by `raw` (columns
// are an orthonormal set from the eigensolver, arbitrary within the group):
// Gram-Schmidt over the columns of the group projector taken in index order.
// The result depends only on the subspace, not on the solver's choice.
Matrix canonical_subspace_basis(const Matrix& raw) {
  const Eigen::Index dim = raw.rows();
  const Eigen::Index mult = raw.cols();
  if (mult == dim) return Matrix::Identity(dim, dim);  // full space

  const Matrix proj = raw * raw.adjoint();
  Matrix out(dim, mult);
  Eigen::Index found = 0;
  for (Eigen::Index j = 0; j < dim && found < mult; ++j) {
    Vector v = proj.col(j);
    for (Eigen::Index k = 0; k < found; ++k) {
      v -= out.col(k) * (out.col(k).dot(v));
    }
    const double nrm = v.norm();
    if (nrm > 1e-6) {
      out.col(found++) = v / nrm;
    }
  }
  if (found < mult) return raw;  // pathological pivoting; keep solver basis
  // One re-orthogonalization sweep tightens the small pivots.
  for (Eigen::Index j = 0; j < mult; ++j) {
    Vector v = out.col(j);
    for (Eigen::Index k = 0; k < j; ++k) {
      v -= out.col(k) * (out.col(k).dot(v));
    }
    out.col(j) = v / v.norm();
  }
  return out;
}

}  // namespace

SpectralDecomposition eig_hermitian(const HermitianOperator& a,
                                    std::optional<double> group_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  const Matrix& evecs = solver.eigenvectors();
  const Eigen::Index dim = evals.size();

  const double span = evals(dim - 1) - evals(0);
  const double tol = group_tol.value_or(1e-9 * (span + 1.0));

  std::vector<double> grouped;
  std::vector<int> mults;
  Matrix basis(dim, dim);
  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index stop = start + 1;
    while (stop < dim && evals(stop) - evals(stop - 1) <= tol) ++stop;
    const Eigen::Index mult = stop - start;
    grouped.push_back(evals.segment(start, mult).mean());
    mults.push_back(static_cast<int>(mult));
    basis.middleCols(start, mult) =
        canonical_subspace_basis(evecs.middleCols(start, mult));
    start = stop;
  }
  return SpectralDecomposition(std::move(grouped), std::move(mults),
                               std::move(basis));
}

Matrix expm_hermitian(const SpectralDecomposition& spec, Complex scale) {
  // Factor out the dominant real exponent so real scales stay finite.
  double max_re = -std::numeric_limits<double>::infinity();
  for (double e : spec.eigenvalues()) {
    max_re = std::max(max_re, (scale * e).real());
  }
  Vector diag(spec.dim());
  for (int g = 0, k = 0; g < spec.groups(); ++g) {
    const Complex w = std::exp(scale * spec.eigenvalues()[g] - max_re);
    for (int m = 0; m < spec.multiplicities()[g]; ++m) diag(k++) = w;
  }
  Matrix shifted = spec.basis() * diag.asDiagonal() * spec.basis().adjoint();
  return std::exp(max_re) * shifted;
}

Matrix expm_hermitian(const HermitianOperator& a, Complex scale) {
  return expm_hermitian(eig_hermitian(a), scale);
}

}  // namespace qwork
