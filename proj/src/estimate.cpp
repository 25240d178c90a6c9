#include "spinlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spinlab/error.hpp"
#include "spinlab/format.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/stats.hpp"

namespace spinlab {

namespace {

double log_two_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) ;
}

}  // namespace

PseudoLikelihood pseudo_loglik(double beta, double h, const SpinConfig& x, const InteractionGraph& g) {
  if (x.size() != g.size()) throw ParameterError("configuration size does not match graph");
  PseudoLikelihood out;
  double hbb = 0.0, hbh = 0.0, hhh = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!x.clamped.empty() && x.clamped[v]) continue;
    double m = 0.0;
    for (const Neighbor& nb : g.neighbors(static_cast<Vertex>(v))) m += nb.weight * x.spins[nb.vertex];
    const double theta = beta * m + h;
    const double xi = x.spins[v];
    const double th = std::tanh(theta);
    const double sech2 = 1.0 - th * th;
    out.value += xi * theta - log_two_cosh(theta);
    out.gradient[0] += (xi - th) * m;
    out.gradient[1] += xi - th;
    hbb -= sech2 * m * m;
    hbh -= sech2 * m;
    hhh -= sech2;
  }
  out.hessian = {{{hbb, hbh}, {hbh, hhh}}};
  return out;
}

EstimateRecord fit_pseudo_likelihood(const SpinConfig& x, const InteractionGraph& g, const FitOptions& opts) {
  if (x.size() != g.size()) throw ParameterError("configuration size does not match graph");
  double sum = 0.0;
  std::size_t free_count = 0;
  bool any_plus = false, any_minus = false;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!x.clamped.empty() && x.clamped[v]) continue;
    ++free_count;
    sum += x.spins[v];
    (x.spins[v] > 0 ? any_plus : any_minus) = true;
  }
  if (free_count == 0 || !(any_plus && any_minus))
    throw DegenerateError("constant configuration: pseudo-likelihood is unbounded in h");

  EstimateRecord rec;
  rec.n = g.size();
  const double xbar = std::clamp(sum / static_cast<double>(free_count), -0.99, 0.99);
  double beta = 0.0, h = std::atanh(xbar);
  if (opts.init) {
    beta = (*opts.init)[0];
    h = (*opts.init)[1];
  }
  beta = std::clamp(beta, 0.0, opts.beta_max);

  // Projected gradient: the β component vanishes when it pushes out of [0, beta_max].
  auto projected = [&](double b, const PseudoLikelihood& q) {
    const bool active = (b <= 0.0 && q.gradient[0] < 0.0) || (b >= opts.beta_max && q.gradient[0] > 0.0);
    return std::array<double, 2>{active ? 0.0 : q.gradient[0], q.gradient[1]};
  };

  auto pl = pseudo_loglik(beta, h, x, g);
  for (rec.iterations = 0; rec.iterations < opts.max_iter; ++rec.iterations) {
    const auto pg = projected(beta, pl);
    const bool beta_active = pg[0] == 0.0 && pl.gradient[0] != 0.0;
    const double gb = pg[0];
    const double gh = pg[1];
    const double gnorm = std::hypot(gb, gh);
    if (gnorm < opts.tol) {
      rec.converged = true;
      break;
    }

    const auto& H = pl.hessian;
    double db = 0.0, dh = 0.0;
    if (beta_active) {
      dh = H[1][1] < 0.0 ? -gh / H[1][1] : gh;
    } else {
      const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
      if (det > 1e-14 * (H[0][0] * H[0][0] + H[1][1] * H[1][1]) && H[0][0] < 0.0) {
        db = -(H[1][1] * gb - H[0][1] * gh) / det;
        dh = -(-H[1][0] * gb + H[0][0] * gh) / det;
      }
      if (db * gb + dh * gh <= 0.0) {
        // Singular curvature (e.g. no edges, so β is unidentified): Newton in h, gradient in β.
        const double scale = 1.0 / (std::abs(H[0][0]) + std::abs(H[1][1]) + 1.0);
        db = gb * scale;
        dh = H[1][1] < 0.0 ? -gh / H[1][1] : gh * scale;
      }
    }

    bool improved = false;
    double step = 1.0;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const double nb = std::clamp(beta + step * db, 0.0, opts.beta_max);
      const double nh = h + step * dh;
      auto cand = pseudo_loglik(nb, nh, x, g);
      // Near the optimum the ascent is below rounding of the objective; then
      // a shrinking gradient decides.
      const bool flat = cand.value >= pl.value - 1e-13 * (1.0 + std::abs(pl.value));
      const auto cg = projected(nb, cand);
      if (cand.value > pl.value || (flat && std::hypot(cg[0], cg[1]) < gnorm)) {
        beta = nb;
        h = nh;
        pl = cand;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  rec.beta_hat = beta;
  rec.h_hat = h;
  rec.objective_final = pl.value;
  return rec;
}

LowerBound lower_bound_value(const InteractionGraph& g, double beta, const McOptions& mc) {
  LowerBound lb;
  lb.q_sq = g.sum_squared_couplings();
  const auto var = null_sum_variance(g, beta, Boundary::Free, mc);
  lb.var_s = var.value;
  lb.var_se = var.se;
  lb.exact = var.exact;
  lb.bound = 1.0 / lb.q_sq + 1.0 / lb.var_s;
  return lb;
}

InteractionGraph square_lattice_of_size(std::size_t n) {
  const auto side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side < 1 || static_cast<std::size_t>(side) * static_cast<std::size_t>(side) != n)
    throw ParameterError("square lattice needs a perfect-square vertex count, got " + std::to_string(n));
  return build_lattice(2, side);
}

namespace {

double running_slope(const std::vector<double>& ns, const std::vector<double>& ys) {
  if (ns.size() < 2) return std::nan("");
  std::vector<double> lx, ly;
  for (std::size_t a = 0; a < ns.size(); ++a) {
    lx.push_back(std::log(ns[a]));
    ly.push_back(std::log(ys[a]));
  }
  return stats::linear_fit(lx, ly).slope;
}

}  // namespace

std::vector<MseRow> mse_experiment(const GraphFactory& model, const MseSpec& spec) {
  if (spec.n_grid.empty() || spec.replicates == 0) throw ParameterError("mse experiment needs n values and replicates");
  std::vector<MseRow> rows;
  std::vector<double> ns, tot, mb, mh;
  for (std::size_t gi = 0; gi < spec.n_grid.size(); ++gi) {
    const InteractionGraph g = model(spec.n_grid[gi]);
    const auto params = IsingParams::uniform_field(g.size(), spec.beta, spec.h);
    validate(g, params);
    const bool cluster = spec.beta >= 0.0 && spec.h >= 0.0;
    const UpdateKind kind = cluster ? UpdateKind::Cluster : UpdateKind::Glauber;
    const long sweeps = spec.sweeps > 0 ? spec.sweeps : default_burn_in(kind, g.size());

    const auto count = static_cast<long long>(spec.replicates);
    std::vector<double> err_b(spec.replicates), err_h(spec.replicates);
    std::vector<std::uint8_t> ok(spec.replicates, 0);
#pragma omp parallel for schedule(dynamic)
    for (long long r = 0; r < count; ++r) {
      const auto x = draw_state(g, params, kind, sweeps, derive_seed(spec.seed, gi, static_cast<std::uint64_t>(r)));
      try {
        const auto rec = fit_pseudo_likelihood(x, g);
        if (rec.converged) {
          err_b[r] = rec.beta_hat - spec.beta;
          err_h[r] = rec.h_hat - spec.h;
          ok[r] = 1;
        }
      } catch (const DegenerateError&) {
      }
    }

    MseRow row;
    row.n = g.size();
    double sb = 0.0, sh = 0.0;
    for (std::size_t r = 0; r < spec.replicates; ++r) {
      if (!ok[r]) {
        ++row.excluded;
        continue;
      }
      ++row.fits;
      sb += err_b[r] * err_b[r];
      sh += err_h[r] * err_h[r];
    }
    row.mse_beta = row.fits ? sb / static_cast<double>(row.fits) : std::nan("");
    row.mse_h = row.fits ? sh / static_cast<double>(row.fits) : std::nan("");
    const auto lb = lower_bound_value(g, spec.beta, spec.bound_mc);
    row.bound_qsq = 1.0 / lb.q_sq;
    row.bound_var = 1.0 / lb.var_s;

    ns.push_back(static_cast<double>(row.n));
    tot.push_back(row.mse_beta + row.mse_h);
    mb.push_back(row.mse_beta);
    mh.push_back(row.mse_h);
    row.slope_running = running_slope(ns, tot);
    row.slope_beta = running_slope(ns, mb);
    row.slope_h = running_slope(ns, mh);
    rows.push_back(row);
  }
  return rows;
}

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows) {
  out << "n,mse_beta,mse_h,bound_qsq,bound_var,slope_running,excluded\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.mse_beta) << ',' << format_double(r.mse_h) << ','
        << format_double(r.bound_qsq) << ',' << format_double(r.bound_var) << ',' << format_double(r.slope_running)
        << ',' << r.excluded << '\n';
}

}  // namespace spinlab
