#include "thermoporo/precond.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermoporo/krylov.hpp"

namespace thermoporo {

std::string to_string(PrecondKind k) { return k == PrecondKind::B1 ? "B1" : "B2"; }
std::string to_string(Realization r) { return r == Realization::Exact ? "exact" : "amg"; }

namespace {

/// One diagonal block of the preconditioner acting on a list of global dofs.
struct SolveBlock {
  std::vector<std::size_t> dofs;
  std::unique_ptr<Factorization> fact;
  std::unique_ptr<AmgHierarchy> amg;
  std::unique_ptr<DeflatedSolve> deflated;
  LinearOperator solve;
};

std::vector<std::size_t> free_dofs(const FunctionSpace& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.num_dofs(); ++i) {
    if (!s.is_boundary_dof(i)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> all_dofs(const FunctionSpace& s) {
  std::vector<std::size_t> out(s.num_dofs());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::vector<std::size_t> shifted(const std::vector<std::size_t>& d, std::size_t off) {
  std::vector<std::size_t> out(d);
  for (auto& i : out) i += off;
  return out;
}

}  // namespace

struct BlockPreconditioner::Impl {
  std::vector<SolveBlock> blocks;
  std::vector<std::size_t> fixed;  // Dirichlet dofs, identity
  const DeflatedSolve* deflation = nullptr;
};

BlockPreconditioner::BlockPreconditioner(const SystemSpaces& s, const ParameterSet& params,
                                         PrecondKind kind, Realization realization,
                                         const PrecondOptions& options)
    : kind_(kind), realization_(realization), offsets_(block_offsets(s)),
      impl_(std::make_unique<Impl>()) {
  const DerivedCoefficients d = derive_coefficients(params);
  const BlockOffsets& o = offsets_;
  if (params.lambda.min() < 1.0) {
    warnings_.push_back("lambda < 1: the full-mass xi block is only spectrally equivalent to the "
                        "mean-value norm for lambda >= 1");
  }

  const FunctionSpace& V = *s.V;
  const FunctionSpace& Q = *s.Q;
  const FunctionSpace& W = *s.W;
  const auto fV = free_dofs(V);
  const auto fW = free_dofs(W);
  const auto aQ = all_dofs(Q);
  const std::size_t nQ = Q.num_dofs(), nWf = fW.size();

  // The mean-value term must stay below the pointwise weight for A1 - y y^T to be SPD.
  const bool by_mu = options.scale_xi_by_mu;
  const CoefficientField xi_coef =
      by_mu ? CoefficientField::apply(d.inv_lambda, params.mu,
                                      [](double il, double m) { return 0.5 / m + il; })
            : CoefficientField::apply(d.inv_lambda, [](double il) { return 1.0 + il; });
  std::vector<double> z = assemble_integrals(Q);
  if (by_mu) {
    const double scale = std::sqrt(0.5 / params.mu.max());
    for (auto& v : z) v *= scale;
  }

  const CsrMatrix auu = assemble_elasticity(V, params.mu).submatrix(fV, fV);
  const CsrMatrix mxi = assemble_mass(Q, xi_coef);

  std::vector<Triplet> entries;  // assembled B without the rank-one term
  auto place = [&](const CsrMatrix& m, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
        entries.push_back({rows[i], cols[m.col_idx()[k]], m.values()[k]});
      }
    }
  };

  std::vector<SolveBlock>& blocks = impl_->blocks;
  // Elasticity
  {
    SolveBlock b;
    b.dofs = shifted(fV, o.u);
    place(auu, b.dofs, b.dofs);
    if (realization == Realization::Exact) {
      b.fact = std::make_unique<Factorization>(auu, FactorizationKind::Cholesky);
    } else {
      std::vector<double> xs, ys;
      for (std::size_t k = 0; k < fV.size(); k += 2) {
        const Point& pt = V.dof_coordinate(fV[k]);
        xs.push_back(pt.x);
        ys.push_back(pt.y);
      }
      b.amg = std::make_unique<AmgHierarchy>(auu, rigid_body_modes(xs, ys), 2, options.amg);
    }
    blocks.push_back(std::move(b));
  }

  auto pw_block = [&](const CoefficientField& mass_c, const CoefficientField& stiff_c) {
    return add(assemble_mass(W, mass_c), 1.0, assemble_stiffness(W, stiff_c), 1.0).submatrix(fW, fW);
  };

  // Builds solver (and Woodbury correction when deflate) for a matrix.
  auto realize = [&](SolveBlock& b, const CsrMatrix& m, bool deflate,
                     const std::vector<double>& zloc, std::vector<int> field) {
    LinearOperator base;
    if (realization == Realization::Exact) {
      b.fact = std::make_unique<Factorization>(m, FactorizationKind::Cholesky);
      base = b.fact->as_operator();
    } else {
      const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(m.rows()), 1);
      b.amg = std::make_unique<AmgHierarchy>(m, ones, 1, options.amg, std::move(field));
      base = b.amg->as_operator();
    }
    if (!deflate) {
      b.solve = base;
      return;
    }
    if (realization == Realization::Amg && options.accurate_deflation_vector) {
      std::vector<double> w(zloc.size());
      const SolveReport r = pcg(m.as_operator(), base, zloc, w, 1e-14, 500);
      if (!r.converged && r.final_relres > 1e-10) {
        throw std::runtime_error("deflation vector solve did not converge");
      }
      b.deflated = std::make_unique<DeflatedSolve>(base, zloc, std::move(w));
    } else {
      b.deflated = std::make_unique<DeflatedSolve>(base, zloc);
    }
    impl_->deflation = b.deflated.get();
    b.solve = b.deflated->as_operator();
  };

  if (kind == PrecondKind::B2) {
    SolveBlock bx;
    bx.dofs = shifted(aQ, o.xi);
    place(mxi, bx.dofs, bx.dofs);
    realize(bx, mxi, true, z, {});
    blocks.push_back(std::move(bx));

    const CsrMatrix app = pw_block(d.C_p, d.t_K);
    SolveBlock bp;
    bp.dofs = shifted(fW, o.p);
    place(app, bp.dofs, bp.dofs);
    realize(bp, app, false, {}, {});
    blocks.push_back(std::move(bp));

    const CsrMatrix att = pw_block(d.C_T, d.t_theta);
    SolveBlock bt;
    bt.dofs = shifted(fW, o.T);
    place(att, bt.dofs, bt.dofs);
    realize(bt, att, false, {}, {});
    blocks.push_back(std::move(bt));
  } else {
    const CsrMatrix mxp = assemble_mass(Q, W, d.alpha_over_lambda).submatrix(aQ, fW);
    const CsrMatrix mxt = assemble_mass(Q, W, d.beta_over_lambda).submatrix(aQ, fW);
    const CsrMatrix app = pw_block(d.c_alpha, d.t_K);
    const CsrMatrix apt = assemble_mass(W, d.c_alphabeta).submatrix(fW, fW);
    const CsrMatrix att = pw_block(d.c_beta, d.t_theta);
    const std::size_t n3 = nQ + 2 * nWf;
    BlockBuilder bb(n3, n3);
    bb.add(0, 0, mxi);
    bb.add(0, nQ, mxp, -1.0);
    bb.add(nQ, 0, mxp, -1.0, true);
    bb.add(0, nQ + nWf, mxt, -1.0);
    bb.add(nQ + nWf, 0, mxt, -1.0, true);
    bb.add(nQ, nQ, app);
    bb.add(nQ, nQ + nWf, apt);
    bb.add(nQ + nWf, nQ, apt, 1.0, true);
    bb.add(nQ + nWf, nQ + nWf, att);
    const CsrMatrix a1 = std::move(bb).build();

    SolveBlock bc;
    bc.dofs = shifted(aQ, o.xi);
    const auto pd = shifted(fW, o.p);
    const auto td = shifted(fW, o.T);
    bc.dofs.insert(bc.dofs.end(), pd.begin(), pd.end());
    bc.dofs.insert(bc.dofs.end(), td.begin(), td.end());
    place(a1, bc.dofs, bc.dofs);
    std::vector<double> zloc(n3, 0.0);
    std::copy(z.begin(), z.end(), zloc.begin());
    std::vector<int> field(n3, 0);
    for (std::size_t i = nQ; i < n3; ++i) field[i] = i < nQ + nWf ? 1 : 2;
    realize(bc, a1, true, zloc, std::move(field));
    blocks.push_back(std::move(bc));
  }

  for (auto& b : blocks) {
    if (!b.solve) b.solve = b.fact ? b.fact->as_operator() : b.amg->as_operator();
  }

  // Identity on the Dirichlet dofs.
  for (auto dof : V.boundary_dofs()) impl_->fixed.push_back(o.u + dof);
  for (auto dof : W.boundary_dofs()) impl_->fixed.push_back(o.p + dof);
  for (auto dof : W.boundary_dofs()) impl_->fixed.push_back(o.T + dof);
  for (auto dof : impl_->fixed) entries.push_back({dof, dof, 1.0});
  sparse_ = CsrMatrix::from_triplets(o.total, o.total, std::move(entries));
  y_.assign(o.total, 0.0);
  std::copy(z.begin(), z.end(), y_.begin() + static_cast<std::ptrdiff_t>(o.xi));
}

BlockPreconditioner::~BlockPreconditioner() = default;
BlockPreconditioner::BlockPreconditioner(BlockPreconditioner&&) noexcept = default;
BlockPreconditioner& BlockPreconditioner::operator=(BlockPreconditioner&&) noexcept = default;

void BlockPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != size() || z.size() != size()) {
    throw std::invalid_argument("preconditioner applied to a vector of the wrong size");
  }
  for (auto dof : impl_->fixed) z[dof] = r[dof];
  std::vector<double> rl, zl;
  for (const auto& b : impl_->blocks) {
    rl.resize(b.dofs.size());
    zl.resize(b.dofs.size());
    for (std::size_t i = 0; i < b.dofs.size(); ++i) rl[i] = r[b.dofs[i]];
    b.solve(rl, zl);
    for (std::size_t i = 0; i < b.dofs.size(); ++i) z[b.dofs[i]] = zl[i];
  }
}

LinearOperator BlockPreconditioner::as_operator() const {
  return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
}

void BlockPreconditioner::multiply(std::span<const double> v, std::span<double> y) const {
  sparse_.multiply(v, y);
  axpy(-dot(y_, v), y_, y);
}

double BlockPreconditioner::deflation_scalar() const {
  return impl_->deflation ? impl_->deflation->deflation_scalar() : 1.0;
}

std::vector<std::size_t> BlockPreconditioner::amg_levels() const {
  std::vector<std::size_t> out;
  for (const auto& b : impl_->blocks) {
    if (b.amg) out.push_back(b.amg->num_levels());
  }
  return out;
}

double norm_b(const BlockPreconditioner& b, std::span<const double> v) {
  std::vector<double> bv(v.size());
  b.multiply(v, bv);
  return std::sqrt(std::max(dot(v, bv), 0.0));
}

double norm_b1(const BlockPreconditioner& b, std::span<const double> v) {
  if (b.kind() != PrecondKind::B1) throw std::invalid_argument("norm_b1 needs a B1 preconditioner");
  return norm_b(b, v);
}

double norm_b2(const BlockPreconditioner& b, std::span<const double> v) {
  if (b.kind() != PrecondKind::B2) throw std::invalid_argument("norm_b2 needs a B2 preconditioner");
  return norm_b(b, v);
}

}  // namespace thermoporo
