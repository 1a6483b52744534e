#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "steady/parametric_duffing.hpp"
#include "steady/qgrid.hpp"
#include "steady/specfn.hpp"
#include "steady/transmon_cavity.hpp"

namespace steady::oracle {

using SparseC = Eigen::SparseMatrix<cplx>;

// Product of ladder operators written left to right, e.g. "a+ a+ b b".
// The letter selects the mode (a = 0, b = 1, ...), a trailing '+' the creation
// operator. Mode 0 is the most significant factor of the tensor product.
struct LadderTerm {
  cplx coeff;
  std::string ops;
};

struct FockOperatorSpec {
  std::vector<int> dims;
  std::vector<LadderTerm> hamiltonian;
  std::vector<LadderTerm> collapse;  // coeff is the rate-absorbed amplitude
};

constexpr int kDefaultDimCap = 4096;

int total_dim(const std::vector<int>& dims);
SparseC ladder_matrix(const std::vector<int>& dims, const std::string& ops);
SparseC hamiltonian_matrix(const FockOperatorSpec& spec, int cap = kDefaultDimCap);

// Column-stacking vectorization, vec(A X B) = (B^T kron A) vec(X):
//   L = -i (1 kron H - H^T kron 1) + sum_k [conj(c_k) kron c_k
//       - 1/2 (1 kron c_k^dag c_k) - 1/2 ((c_k^dag c_k)^T kron 1)]
SparseC build_liouvillian(const FockOperatorSpec& spec, int cap = kDefaultDimCap);

struct SteadyDensityMatrix {
  std::vector<int> dims;
  Eigen::MatrixXcd rho;
  double residual_norm = 0;
  bool truncation_converged = false;
  bool iterative = false;
};

struct SolveOptions {
  bool force_iterative = false;
  int iterative_above = 250000;  // D^2 above which the Krylov path is used
  double iterative_tol = 1e-13;
  int iterative_max_iter = 20000;
};

SteadyDensityMatrix steady_state(const SparseC& liouvillian, const std::vector<int>& dims,
                                 const SolveOptions& opt = {});

cplx expectation(const SteadyDensityMatrix& s, const std::string& ops);
Eigen::MatrixXcd reduced_density_matrix(const SteadyDensityMatrix& s, int mode);

using SpecBuilder = std::function<FockOperatorSpec(const std::vector<int>&)>;

struct ConvergeOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-12;
  int cap = kDefaultDimCap;
  bool throw_at_cap = false;
  SolveOptions solve;
};

struct ConvergedResult {
  std::vector<cplx> values;
  std::vector<int> dims_used;
  bool truncation_converged = false;
  SteadyDensityMatrix state;
};

// Grows every dimension by 50% until each observable changes by less than
// rel_tol (relative, with abs_floor) between successive truncations.
ConvergedResult converged_solve(const SpecBuilder& build,
                                const std::vector<std::string>& observables,
                                std::vector<int> start_dims, const ConvergeOptions& opt = {});

// Q(alpha) = <alpha|rho|alpha>/pi for a single-mode rho.
QGrid qfunction_from_rho(const Eigen::MatrixXcd& rho, const GridSpec& grid);

FockOperatorSpec paramp_spec(const ParampParams& p, int dim);
FockOperatorSpec kerr_spec(double delta, double chi, cplx eps, double gamma, int dim);
// modes: a = cavity (dims[0]), b = transmon (dims[1])
FockOperatorSpec transmon_cavity_spec(const TransmonCavityParams& p, const std::vector<int>& dims);

}  // namespace steady::oracle
