#ifndef DYNBIOT_SOLVERS_HPP
#define DYNBIOT_SOLVERS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "dynbiot/sparse.hpp"

namespace dynbiot {

class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

enum class SolveStatus { Converged, MaxIterations, Breakdown, Singular };

struct SolveReport {
    SolveStatus status = SolveStatus::Converged;
    int iterations = 0;
    double relative_residual = 0.0;  ///< ||b - A x|| / ||b||, re-verified by matvec

    bool ok() const { return status == SolveStatus::Converged; }
};

/// Jacobi-preconditioned conjugate gradients for SPD systems.
/// The returned residual bound is re-verified with an explicit matvec.
/// A detected loss of positive definiteness reports Breakdown.
SolveReport solve_spd(const SparseMatrix& a, const Vector& b, Vector& x, double rel_tol = 1e-12,
                      int max_iter = 10000);

/// General square solver: reverse Cuthill-McKee reordering followed by a
/// banded LU factorization with partial pivoting. Residual re-verified.
SolveReport solve_general(const SparseMatrix& a, const Vector& b, Vector& x,
                          double rel_tol = 1e-12, int max_iter = 0);

/// Reverse Cuthill-McKee ordering of the symmetrized pattern of `a`.
/// perm[k] = original index of the node placed k-th.
std::vector<int> rcm_ordering(const SparseMatrix& a);

/// Cached banded Cholesky factorization (RCM-reordered) for repeated solves
/// with one SPD matrix. Throws SolverError if the matrix is not positive
/// definite or the band storage would exceed `max_band_bytes`.
class BandCholesky {
  public:
    explicit BandCholesky(const SparseMatrix& a, std::size_t max_band_bytes = std::size_t{1} << 31);

    Vector solve(const Vector& b) const;
    int bandwidth() const { return kd_; }

  private:
    int n_ = 0;
    int kd_ = 0;  // half bandwidth after reordering
    std::vector<int> perm_;      // new -> old
    std::vector<int> inv_perm_;  // old -> new
    std::vector<double> band_;   // (kd+1) x n, column-major, lower band
};

/// Cached banded LU factorization with partial pivoting (RCM-reordered) for
/// repeated solves with one general square matrix.
class BandLU {
  public:
    explicit BandLU(const SparseMatrix& a, std::size_t max_band_bytes = std::size_t{1} << 31);

    Vector solve(const Vector& b) const;
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

  private:
    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 0;  // 2*kl + ku + 1
    std::vector<int> perm_;
    std::vector<int> inv_perm_;
    std::vector<int> pivots_;
    std::vector<double> band_;  // ldab x n, column-major
};

}  // namespace dynbiot

#endif
