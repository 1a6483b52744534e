#include "steady/lindblad_oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "steady/errors.hpp"

namespace steady::oracle {

namespace {

using Triplet = Eigen::Triplet<cplx>;
const cplx I(0, 1);

struct Ladder {
  int mode;
  bool create;
};

std::vector<Ladder> parse_ladder(const std::string& ops, int nmodes) {
  std::vector<Ladder> out;
  std::istringstream in(ops);
  std::string tok;
  while (in >> tok) {
    if (tok.empty() || tok[0] < 'a' || tok[0] > 'z' || tok.size() > 2 ||
        (tok.size() == 2 && tok[1] != '+'))
      throw DomainError("bad ladder token '" + tok + "'");
    const int mode = tok[0] - 'a';
    if (mode >= nmodes) throw DimensionError("ladder token '" + tok + "' names a missing mode");
    out.push_back({mode, tok.size() == 2});
  }
  return out;
}

SparseC identity(int n) {
  SparseC m(n, n);
  m.setIdentity();
  return m;
}

}  // namespace

int total_dim(const std::vector<int>& dims) {
  long long d = 1;
  for (int n : dims) {
    if (n < 2) throw DimensionError("every mode needs dimension >= 2");
    d *= n;
    if (d > (1 << 30)) throw DimensionError("dimension overflow");
  }
  return int(d);
}

SparseC ladder_matrix(const std::vector<int>& dims, const std::string& ops) {
  const int D = total_dim(dims);
  const int nm = int(dims.size());
  const auto seq = parse_ladder(ops, nm);
  std::vector<int> stride(nm, 1);
  for (int i = nm - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  std::vector<Triplet> trip;
  trip.reserve(D);
  std::vector<int> occ(nm);
  for (int col = 0; col < D; ++col) {
    for (int i = 0; i < nm; ++i) occ[i] = (col / stride[i]) % dims[i];
    double amp = 1;
    for (auto it = seq.rbegin(); it != seq.rend() && amp != 0; ++it) {
      int& n = occ[it->mode];
      if (it->create) {
        if (n + 1 >= dims[it->mode]) amp = 0;
        else amp *= std::sqrt(double(++n));
      } else {
        if (n == 0) amp = 0;
        else amp *= std::sqrt(double(n--));
      }
    }
    if (amp == 0) continue;
    int row = 0;
    for (int i = 0; i < nm; ++i) row += occ[i] * stride[i];
    trip.emplace_back(row, col, amp);
  }
  SparseC m(D, D);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseC hamiltonian_matrix(const FockOperatorSpec& spec, int cap) {
  const int D = total_dim(spec.dims);
  if (D > cap) throw DimensionError("Hilbert-space dimension exceeds cap");
  SparseC h(D, D);
  for (const auto& t : spec.hamiltonian) h += t.coeff * ladder_matrix(spec.dims, t.ops);
  SparseC dag = SparseC(h.adjoint());
  const double nrm = h.norm();
  if ((h - dag).norm() > 1e-12 * std::max(1.0, nrm))
    throw DomainError("Hamiltonian terms are not Hermitian-conjugate paired");
  return h;
}

SparseC build_liouvillian(const FockOperatorSpec& spec, int cap) {
  const SparseC h = hamiltonian_matrix(spec, cap);
  const int D = int(h.rows());
  const SparseC id = identity(D);
  SparseC hT = SparseC(h.transpose());
  SparseC L = -I * (SparseC(Eigen::kroneckerProduct(id, h)) -
                    SparseC(Eigen::kroneckerProduct(hT, id)));
  for (const auto& c : spec.collapse) {
    const SparseC op = c.coeff * ladder_matrix(spec.dims, c.ops);
    const SparseC opc = SparseC(op.conjugate());
    const SparseC cdc = SparseC(op.adjoint()) * op;
    const SparseC cdcT = SparseC(cdc.transpose());
    L += SparseC(Eigen::kroneckerProduct(opc, op)) -
         0.5 * SparseC(Eigen::kroneckerProduct(id, cdc)) -
         0.5 * SparseC(Eigen::kroneckerProduct(cdcT, id));
  }
  L.prune(cplx(0.0));
  L.makeCompressed();
  return L;
}

SteadyDensityMatrix steady_state(const SparseC& L, const std::vector<int>& dims,
                                 const SolveOptions& opt) {
  const int D = total_dim(dims);
  const int D2 = D * D;
  if (L.rows() != D2 || L.cols() != D2) throw DimensionError("Liouvillian size mismatch");
  // Row 0 of L is replaced by the trace functional.
  std::vector<Triplet> trip;
  trip.reserve(L.nonZeros() + D);
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseC::InnerIterator it(L, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < D; ++i) trip.emplace_back(0, i * D + i, 1.0);
  SparseC A(D2, D2);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(D2);
  b(0) = 1;

  SteadyDensityMatrix out;
  out.dims = dims;
  Eigen::VectorXcd x;
  if (opt.force_iterative || D2 > opt.iterative_above) {
    Eigen::BiCGSTAB<SparseC, Eigen::DiagonalPreconditioner<cplx>> solver;
    solver.setTolerance(opt.iterative_tol);
    solver.setMaxIterations(opt.iterative_max_iter);
    solver.compute(A);
    x = solver.solve(b);
    if (solver.info() != Eigen::Success)
      throw NonConvergence("steady_state: BiCGSTAB did not converge");
    out.iterative = true;
  } else {
    Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SingularSystem("steady_state: trace-replaced Liouvillian is singular");
    x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SingularSystem("steady_state: solve failed");
  }
  if (!x.allFinite()) throw SingularSystem("steady_state: non-finite solution");
  const double lnorm = L.norm();
  const double rel = (A * x - b).norm() / std::max(1.0, lnorm * x.norm());
  if (rel > 1e-6) throw SingularSystem("steady_state: kernel is not one-dimensional");

  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), D, D);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  out.rho = rho;
  Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(out.rho.data(), D2);
  out.residual_norm = (L * v).norm();
  return out;
}

cplx expectation(const SteadyDensityMatrix& s, const std::string& ops) {
  const SparseC op = ladder_matrix(s.dims, ops);
  cplx acc = 0;
  // Tr(rho O) = sum_{ij} rho_ji O_ij
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseC::InnerIterator it(op, k); it; ++it) acc += s.rho(it.col(), it.row()) * it.value();
  return acc;
}

Eigen::MatrixXcd reduced_density_matrix(const SteadyDensityMatrix& s, int mode) {
  const int nm = int(s.dims.size());
  if (mode < 0 || mode >= nm) throw DimensionError("reduced_density_matrix: bad mode");
  const int D = total_dim(s.dims);
  const int n = s.dims[mode];
  int inner = 1;
  for (int i = mode + 1; i < nm; ++i) inner *= s.dims[i];
  const int outer = D / (n * inner);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  for (int o = 0; o < outer; ++o)
    for (int in = 0; in < inner; ++in)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r(i, j) += s.rho((o * n + i) * inner + in, (o * n + j) * inner + in);
  return r;
}

ConvergedResult converged_solve(const SpecBuilder& build, const std::vector<std::string>& observables,
                                std::vector<int> dims, const ConvergeOptions& opt) {
  auto solve_at = [&](const std::vector<int>& d, std::vector<cplx>& vals) {
    const auto spec = build(d);
    auto st = steady_state(build_liouvillian(spec, opt.cap), d, opt.solve);
    vals.clear();
    for (const auto& o : observables) vals.push_back(expectation(st, o));
    return st;
  };
  ConvergedResult res;
  std::vector<cplx> prev, cur;
  auto state = solve_at(dims, prev);
  while (true) {
    std::vector<int> next = dims;
    for (int& n : next) n = std::max(n + 1, int(std::ceil(1.5 * n)));
    long long D = 1;
    for (int n : next) D *= n;
    if (D > opt.cap) {
      res.values = prev;
      res.dims_used = dims;
      res.truncation_converged = false;
      res.state = std::move(state);
      if (opt.throw_at_cap) throw DimensionError("converged_solve: dimension cap reached");
      return res;
    }
    auto st = solve_at(next, cur);
    bool ok = true;
    for (size_t i = 0; i < cur.size(); ++i)
      if (std::abs(cur[i] - prev[i]) > opt.rel_tol * std::abs(cur[i]) + opt.abs_floor) ok = false;
    dims = next;
    prev = cur;
    state = std::move(st);
    if (ok) {
      res.values = prev;
      res.dims_used = dims;
      res.truncation_converged = true;
      state.truncation_converged = true;
      res.state = std::move(state);
      return res;
    }
  }
}

QGrid qfunction_from_rho(const Eigen::MatrixXcd& rho, const GridSpec& grid) {
  QGrid q = make_empty_grid(grid);
  const int n = int(rho.rows());
  Eigen::VectorXcd u(n);
  for (int iy = 0; iy < q.ny(); ++iy)
    for (int ix = 0; ix < q.nx(); ++ix) {
      const cplx a(q.x_axis[ix], q.y_axis[iy]);
      // u_k = <k|alpha>
      u(0) = std::exp(-0.5 * std::norm(a));
      for (int k = 1; k < n; ++k) u(k) = u(k - 1) * a / std::sqrt(double(k));
      const cplx v = u.dot(rho * u);
      q.values[size_t(iy) * q.nx() + ix] = v.real() / std::numbers::pi;
    }
  q.normalization_estimate = riemann_sum(q);
  return q;
}

FockOperatorSpec paramp_spec(const ParampParams& p, int dim) {
  validate(p);
  FockOperatorSpec s;
  s.dims = {dim};
  s.hamiltonian = {{p.delta, "a+ a"},
                   {I * p.eps1, "a+"},
                   {-I * std::conj(p.eps1), "a"},
                   {0.5 * I * p.eps2, "a+ a+"},
                   {-0.5 * I * std::conj(p.eps2), "a a"},
                   {0.5 * p.u, "a+ a+ a a"}};
  s.collapse = {{std::sqrt(2 * p.gamma1), "a"}};
  if (p.gamma2 > 0) s.collapse.push_back({std::sqrt(p.gamma2), "a a"});
  return s;
}

FockOperatorSpec kerr_spec(double delta, double chi, cplx eps, double gamma, int dim) {
  FockOperatorSpec s;
  s.dims = {dim};
  s.hamiltonian = {{delta, "a+ a"},
                   {0.5 * chi, "a+ a+ a a"},
                   {I * eps, "a+"},
                   {-I * std::conj(eps), "a"}};
  if (gamma > 0) s.collapse = {{std::sqrt(gamma), "a"}};
  return s;
}

FockOperatorSpec transmon_cavity_spec(const TransmonCavityParams& p, const std::vector<int>& dims) {
  validate(p);
  if (dims.size() != 2) throw DimensionError("transmon_cavity_spec: need two mode dimensions");
  FockOperatorSpec s;
  s.dims = dims;
  s.hamiltonian = {{p.delta_c, "a+ a"},
                   {I * p.epsilon, "a+"},
                   {-I * std::conj(p.epsilon), "a"},
                   {I * p.g, "a b+"},
                   {-I * p.g, "a+ b"},
                   {p.delta_t(), "b+ b"},
                   {0.5 * p.chi, "b+ b+ b b"}};
  s.collapse = {{std::sqrt(p.gamma_c), "a"}};
  if (p.gamma_t > 0) s.collapse.push_back({std::sqrt(p.gamma_t), "b"});
  return s;
}

}  // namespace steady::oracle
