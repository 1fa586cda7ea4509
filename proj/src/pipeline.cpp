#include "tbt/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "tbt/identities.hpp"
#include "tbt/recovery.hpp"

namespace tbt {

namespace {

SpecSummary summary_of(const SpecFile& file) {
  return {file.spec.dims(), file.spec.class_tag(), file.seed};
}

void add_check(VerificationReport& report, const RunConfig& config, const std::string& name,
               double residual) {
  report.add(name, residual, config.tol(name, default_tolerance(name)));
}

bool exchange_class(StructureClass c) {
  return c == StructureClass::dstu || c == StructureClass::toeplitz3d;
}

struct Worst {
  double value = 0;
  void operator()(double r) { value = std::isnan(r) || std::isnan(value) ? std::nan("") : std::max(value, r); }
};

}  // namespace

const std::vector<DefaultTolerance>& default_tolerances() {
  static const std::vector<DefaultTolerance> table = {
      {"structure_class", 1e-13},
      {"identity_T_p1", 1e-12},
      {"identity_T_p2", 1e-12},
      {"identity_T_p3", 1e-12},
      {"identity_M4_k1", 1e-12},
      {"identity_M4_k2", 1e-12},
      {"identity_M1_p1", 1e-12},
      {"identity_M1_p2", 1e-12},
      {"inverse_identity_p1", 1e-11},
      {"inverse_identity_p2", 1e-11},
      {"commutation", 1e-14},
      {"coupling_annihilator", 1e-14},
      {"exchange_transpose", 1e-13},
      {"inverse", 1e-12},
      {"omega_p1", 1e-9},
      {"omega_p2", 1e-9},
      {"uhat_recovery", 1e-9},
      {"u_recovery", 1e-9},
      {"uhat_annihilator", 1e-11},
      {"u_annihilator", 1e-11},
      {"rho_route", 1e-9},
      {"cross_relation", 1e-9},
      {"exchange_u_from_uhat", 1e-9},
      {"exchange_G21", 1e-12},
      {"gamma_hat_transposition", 1e-11},
      {"adjoint_u_from_uhat", 1e-9},
      {"adjoint_G21", 1e-12},
      {"pi_adjoint", 0.0},
  };
  return table;
}

double default_tolerance(const std::string& name) {
  for (const auto& d : default_tolerances())
    if (name == d.name) return d.tol;
  throw std::out_of_range("no default tolerance for check '" + name + "'");
}

VerificationReport run_verify(const SpecFile& file, const RunConfig& config) {
  config.validate();
  const BlockTbtSpec& spec = file.spec;
  const StructureClass cls = spec.class_tag();
  VerificationReport report(summary_of(file));

  add_check(report, config, "structure_class", structure_check(spec).residual(cls));

  const CouplingSet cs = build_M(spec);
  const Mat t = assemble(spec);
  const int last = cs.has_third() ? 3 : 2;
  for (int p = 1; p <= last; ++p)
    add_check(report, config, "identity_T_p" + std::to_string(p), verify_identity_T(t, cs, p));
  for (int k = 1; k <= 2; ++k)
    add_check(report, config, "identity_M4_k" + std::to_string(k), verify_identity_M4(spec, cs, k));
  for (int p = 1; p <= 2; ++p)
    add_check(report, config, "identity_M1_p" + std::to_string(p), verify_identity_M1(spec, cs, p));

  try {
    const Mat r = inverse(t);
    for (int p = 1; p <= 2; ++p)
      add_check(report, config, "inverse_identity_p" + std::to_string(p),
                verify_inverse_identity(r, cs, p));
  } catch (const SingularMatrix&) {
    // The inverse identities only apply to invertible matrices.
  }

  add_check(report, config, "commutation", commutation_residual(cs));
  add_check(report, config, "coupling_annihilator", annihilator_residual(cs));

  if (exchange_class(cls)) {
    const ExchangeSet ex = exchange_set(spec.dims());
    add_check(report, config, "exchange_transpose",
              rel_residual(ex.U * t * ex.U, transpose(t)));
  }
  return report;
}

VerificationReport run_recover(const SpecFile& file, const RunConfig& config) {
  config.validate();
  const BlockTbtSpec& spec = file.spec;
  const StructureClass cls = spec.class_tag();
  const DimTriple& dims = spec.dims();
  VerificationReport report(summary_of(file));

  add_check(report, config, "structure_class", structure_check(spec).residual(cls));

  const CouplingSet cs = build_M(spec);
  const Mat t = assemble(spec);
  const InverseData id = invert_and_gamma(t, cs);
  add_check(report, config, "inverse", norm_max(t * id.R - eye(t.rows())));

  const MinimalData md = minimal_data(id, cs);
  const Mat hat_l = hat_annihilator(cs).adjoint();
  const Mat breve_l = breve_annihilator(cs);
  const bool dstu = exchange_class(cls);
  const bool sa = cls == StructureClass::self_adjoint;
  std::optional<ExchangeSet> ex;
  if (dstu) ex = exchange_set(dims);

  Worst omega1, omega2, uhat_rec, u_rec, uhat_ann, u_ann, rho, cross, ex_u, sa_u;
  SamplePoints points(config.sample_seed);

  for (int n = 0; n < config.samples; ++n) {
    for (int attempt = 1;; ++attempt) {
      const SamplePair pair = points.next_pair();
      const Point x = points.next_point();
      const Point y = points.next_point();
      const Point& lambda = pair.lambda;
      const Point& mu = pair.mu;
      try {
        const KernelValues kv = u_uhat_direct(id, cs, lambda, mu);
        const Mat uhat = recover_uhat(md, cs, lambda);
        const Mat u = recover_u(md, cs, mu);
        const Mat omega = omega_direct(id, cs, lambda, mu);
        const double r1 = rel_residual(omega_from_kernels(u, uhat, dims, lambda, mu, 1), omega);
        const double r2 = rel_residual(omega_from_kernels(u, uhat, dims, lambda, mu, 2), omega);

        const OmegaFn recovered = [&](const Point& l, const Point& m) {
          return omega_min(md, cs, l, m, 1);
        };
        const double rr = rel_residual(rho_from_omega(recovered, x, y), rho_direct(id, dims, x, y));

        const Mat lhs = (lambda[1] - mu[1]) * kv.u1 * kv.uhat1;
        const Mat rhs = (lambda[0] - mu[0]) * kv.u2 * kv.uhat2;

        double exu = 0, sau = 0;
        for (int p = 1; p <= 2 && (dstu || sa); ++p) {
          const Mat direct = u_direct(id, cs, p, mu);
          if (dstu) exu = std::max(exu, rel_residual(dstu_u_from_uhat(md, cs, mu, p), direct));
          if (sa) sau = std::max(sau, rel_residual(sa_u_from_uhat(md, cs, mu, p), direct));
        }

        omega1(r1);
        omega2(r2);
        uhat_rec(rel_residual(uhat, kv.uhat()));
        u_rec(rel_residual(u, kv.u()));
        uhat_ann(norm_max(hat_l * uhat));
        u_ann(norm_max(u * breve_l));
        rho(rr);
        cross(rel_residual(lhs, rhs));
        ex_u(exu);
        sa_u(sau);
        break;
      } catch (const GSingular&) {
        if (attempt >= kMaxSampleAttempts) throw;
      } catch (const ESingular&) {
        if (attempt >= kMaxSampleAttempts) throw;
      } catch (const DegenerateSamplePair&) {
        if (attempt >= kMaxSampleAttempts) throw;
      }
    }
  }

  add_check(report, config, "omega_p1", omega1.value);
  add_check(report, config, "omega_p2", omega2.value);
  add_check(report, config, "uhat_recovery", uhat_rec.value);
  add_check(report, config, "u_recovery", u_rec.value);
  add_check(report, config, "uhat_annihilator", uhat_ann.value);
  add_check(report, config, "u_annihilator", u_ann.value);
  add_check(report, config, "rho_route", rho.value);
  add_check(report, config, "cross_relation", cross.value);

  if (dstu) {
    add_check(report, config, "exchange_u_from_uhat", ex_u.value);
    add_check(report, config, "exchange_G21", rel_residual(dstu_G21_from_G12(md, cs), md.G21));
    double f4 = 0;
    for (int p = 1; p <= 2; ++p) f4 = std::max(f4, gamma_hat_transposition_residual(id, cs, *ex, p));
    add_check(report, config, "gamma_hat_transposition", f4);
  }
  if (sa) {
    add_check(report, config, "adjoint_u_from_uhat", sa_u.value);
    add_check(report, config, "adjoint_G21", rel_residual(sa_G21_from_G12(md, cs), md.G21));
    add_check(report, config, "pi_adjoint", pi_adjoint_residual(cs));
  }
  return report;
}

}  // namespace tbt
