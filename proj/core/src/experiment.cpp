#include "symk/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symk/bounds.hpp"
#include "symk/lbc.hpp"
#include "symk/matrix.hpp"
#include "symk/matrix_io.hpp"
#include "symk/ooc.hpp"
#include "symk/tbs.hpp"
#include "symk/views.hpp"

namespace symk {

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::ref_syrk: return "ref-syrk";
    case Algo::ooc_syrk: return "ooc-syrk";
    case Algo::tbs: return "tbs";
    case Algo::tbs_tiled: return "tbs-tiled";
    case Algo::ref_chol: return "ref-chol";
    case Algo::ooc_chol: return "ooc-chol";
    case Algo::lbc: return "lbc";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
  for (Algo a : {Algo::ref_syrk, Algo::ooc_syrk, Algo::tbs, Algo::tbs_tiled,
                 Algo::ref_chol, Algo::ooc_chol, Algo::lbc})
    if (algo_name(a) == name) return a;
  return std::nullopt;
}

bool is_cholesky(Algo a) {
  return a == Algo::ref_chol || a == Algo::ooc_chol || a == Algo::lbc;
}

bool is_reference(Algo a) {
  return a == Algo::ref_syrk || a == Algo::ref_chol;
}

namespace {

double rel_error_packed(const PackedTriangular& got,
                        const PackedTriangular& want) {
  double max_diff = 0, max_abs = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(got.data()[i] - want.data()[i]));
    max_abs = std::max(max_abs, std::abs(want.data()[i]));
  }
  return max_abs > 0 ? max_diff / max_abs : max_diff;
}

double reconstruction_error(const PackedTriangular& l,
                            const PackedTriangular& a) {
  const std::size_t n = a.n();
  double max_diff = 0, max_abs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0;
      for (std::size_t k = 0; k <= j; ++k) s += l.at(i, k) * l.at(j, k);
      max_diff = std::max(max_diff, std::abs(s - a.at(i, j)));
      max_abs = std::max(max_abs, std::abs(a.at(i, j)));
    }
  return max_abs > 0 ? max_diff / max_abs : max_diff;
}

void validate(const ExperimentSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("run: require N >= 1");
  if (!is_cholesky(spec.algo) && spec.m < 1)
    throw std::invalid_argument("run: SYRK algorithms require M >= 1");
  if (is_reference(spec.algo)) {
    if (spec.mode == RunMode::count)
      throw std::invalid_argument(
          "run: reference kernels have no count-only mode");
  } else if (spec.s < 3) {
    throw std::invalid_argument("run: require S >= 3");
  }
  if (spec.algo == Algo::tbs_tiled && !spec.tile)
    throw std::invalid_argument("run: tbs-tiled requires a tile size");
  if (spec.verify && spec.mode != RunMode::compute)
    throw std::invalid_argument("run: --verify needs compute mode");
  if (spec.mode == RunMode::compute &&
      (spec.n > spec.compute_cap || spec.m > spec.compute_cap))
    throw std::invalid_argument(
        "run: compute mode capped at N, M <= " +
        std::to_string(spec.compute_cap) + " (raise the cap to override)");
}

double upper_envelope_for(const ExperimentSpec& spec, std::size_t eff_b) {
  const auto n = static_cast<double>(spec.n);
  const auto m = static_cast<double>(spec.m);
  switch (spec.algo) {
    case Algo::ooc_syrk: {
      const auto t = static_cast<double>(tile_side_for(spec.s));
      return n * n * m / t + n * m;
    }
    case Algo::tbs:
      return tbs_load_envelope(spec.n, spec.m, spec.s);
    case Algo::tbs_tiled:
      return tbs_tiled_load_envelope(spec.n, spec.m, spec.s, *spec.tile);
    case Algo::ooc_chol: {
      const auto t = static_cast<double>(tile_side_for(spec.s));
      return n * n * n / (3.0 * t) + 4.0 * n * n;
    }
    case Algo::lbc:
      return lbc_load_envelope(spec.n, spec.s, eff_b);
    default:
      return 0.0;
  }
}

Matrix load_dense(const std::string& path, std::size_t n, std::size_t m) {
  auto any = load_matrix(path);
  auto* dense = std::get_if<Matrix>(&any);
  if (!dense)
    throw std::invalid_argument("input file does not hold a dense matrix: " +
                                path);
  if (dense->rows() != n || dense->cols() != m)
    throw std::invalid_argument("input matrix dimensions do not match spec");
  return std::move(*dense);
}

PackedTriangular load_packed(const std::string& path, std::size_t n) {
  auto any = load_matrix(path);
  auto* packed = std::get_if<PackedTriangular>(&any);
  if (!packed)
    throw std::invalid_argument("input file does not hold a packed matrix: " +
                                path);
  if (packed->n() != n)
    throw std::invalid_argument("input matrix dimensions do not match spec");
  return std::move(*packed);
}

BoundReport run_checked(const ExperimentSpec& spec) {
  validate(spec);
  BoundReport report;
  report.spec = spec;
  const auto n = static_cast<double>(spec.n);
  const auto m = static_cast<double>(spec.m);
  const auto s = static_cast<double>(spec.s);
  const bool chol = is_cholesky(spec.algo);
  report.lower_bound =
      chol ? chol_lower_bound(n, s) : syrk_lower_bound(n, m, s);

  const bool compute = spec.mode == RunMode::compute;

  // Operand storage (compute mode only; count mode uses bare shapes).
  std::optional<Matrix> a_dense;
  std::optional<PackedTriangular> c_packed;  // SYRK result
  std::optional<PackedTriangular> a_packed;  // Cholesky input/output
  if (compute) {
    if (chol) {
      a_packed = spec.in_matrix.empty() ? random_spd(spec.n, spec.seed)
                                        : load_packed(spec.in_matrix, spec.n);
    } else {
      a_dense = spec.in_matrix.empty()
                    ? random_dense(spec.n, spec.m, spec.seed)
                    : load_dense(spec.in_matrix, spec.n, spec.m);
      c_packed.emplace(spec.n);
    }
  }

  // Reference originals kept aside for verification.
  std::optional<PackedTriangular> a_original;
  if (compute && spec.verify && chol) a_original = *a_packed;

  if (is_reference(spec.algo)) {
    if (spec.algo == Algo::ref_syrk) {
      reference_syrk(*a_dense, *c_packed);
      report.verified = spec.verify;  // the reference is its own oracle
    } else {
      *a_packed = reference_cholesky(*a_packed);
      if (spec.verify) {
        const double err = reconstruction_error(*a_packed, *a_original);
        if (err > 1e-9)
          throw std::runtime_error("verification failed: |L L^T - A| = " +
                                   std::to_string(err));
        report.verified = true;
      }
    }
  } else {
    IoLedger ledger(spec.s);
    const PanelView a = chol ? PanelView{}
                        : compute ? panel_of(*a_dense)
                                  : panel_shape(spec.n, spec.m);
    const TriView c = [&] {
      if (chol)
        return compute ? tri_of(*a_packed, matrix_a)
                       : tri_shape(spec.n, matrix_a);
      return compute ? tri_of(*c_packed) : tri_shape(spec.n);
    }();

    switch (spec.algo) {
      case Algo::ooc_syrk:
        report.io = ooc_syrk(a, c, ledger);
        break;
      case Algo::tbs:
        report.io = tbs(a, c, ledger).io;
        break;
      case Algo::tbs_tiled:
        report.effective_b = *spec.tile;
        report.io = tbs_tiled(a, c, *spec.tile, ledger).io;
        break;
      case Algo::ooc_chol:
        report.io = ooc_chol(c, ledger);
        break;
      case Algo::lbc: {
        auto res = lbc(c, ledger, spec.block);
        report.effective_b = res.block;
        report.io = res.io;
        break;
      }
      default:
        break;
    }

    const double denom = chol ? n * n * n / std::sqrt(s)
                              : n * n * m / std::sqrt(s);
    const double measured = static_cast<double>(
        chol ? report.io.loads : report.io.loads_a());
    report.ratio = measured / denom;
    report.bound_ok = measured >= report.lower_bound;
    report.upper_envelope = upper_envelope_for(spec, report.effective_b);

    if (compute && spec.verify) {
      if (chol) {
        const double err = reconstruction_error(*a_packed, *a_original);
        if (err > 1e-9)
          throw std::runtime_error("verification failed: |L L^T - A| = " +
                                   std::to_string(err));
      } else {
        PackedTriangular want(spec.n);
        reference_syrk(*a_dense, want);
        const double err = rel_error_packed(*c_packed, want);
        if (err > 1e-9)
          throw std::runtime_error(
              "verification failed against reference_syrk: rel err = " +
              std::to_string(err));
      }
      report.verified = true;
    }
  }

  if (!spec.out_matrix.empty()) {
    if (!compute)
      throw std::invalid_argument("cannot write a matrix from count mode");
    if (chol)
      save_matrix(spec.out_matrix, *a_packed);
    else
      save_matrix(spec.out_matrix, *c_packed);
  }
  return report;
}

}  // namespace

BoundReport run(const ExperimentSpec& spec) { return run_checked(spec); }

std::vector<BoundReport> sweep(const std::vector<ExperimentSpec>& specs) {
  std::vector<BoundReport> reports;
  reports.reserve(specs.size());
  for (const ExperimentSpec& spec : specs) {
    try {
      reports.push_back(run(spec));
    } catch (const std::exception& e) {
      BoundReport failed;
      failed.spec = spec;
      failed.error = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

std::string BoundReport::csv_header() {
  return "algo,N,M,S,b,mode,loads_A,loads_C,stores,peak_resident,lower_bound,"
         "ratio";
}

std::string BoundReport::csv_row() const {
  std::ostringstream out;
  out << algo_name(spec.algo) << ',' << spec.n << ',';
  if (!is_cholesky(spec.algo)) out << spec.m;
  out << ',';
  if (!is_reference(spec.algo)) out << spec.s;
  out << ',';
  if (effective_b > 0) out << effective_b;
  out << ',' << (spec.mode == RunMode::compute ? "compute" : "count") << ',';
  if (!error.empty()) {
    out << ",,,,,";
    return out.str();
  }
  out << io.loads_a() << ',' << io.loads_c() << ',' << io.stores << ','
      << io.peak_resident << ',';
  if (!is_reference(spec.algo)) {
    out << lower_bound << ',' << ratio;
  } else {
    out << ',';
  }
  return out.str();
}

void write_csv(std::ostream& out, std::span<const BoundReport> reports) {
  out << BoundReport::csv_header() << '\n';
  for (const BoundReport& r : reports) out << r.csv_row() << '\n';
}

}  // namespace symk
