#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "cupform/analysis.hpp"
#include "cupform/error.hpp"
#include "cupform/form.hpp"

namespace cupform {

struct WfSearchConfig {
  std::uint64_t seed = 0;
  int max_starts = 64;
  long rationalization_depth = 1000000;
  double residual_tol = 1e-20;
  int max_iterations = 150;
};

struct NumericCandidate {
  std::vector<double> unit_point;
  double residual = 0.0;
};

struct WfSearchResult {
  std::vector<WfPoint> certified;  // canonical, deduplicated, sorted
  bool complete = false;           // nonvanishing certified count hits the cap
  std::vector<NumericCandidate> numeric_only;
};

// Lexicographic order on rational vectors, for canonical point keys.
struct RatVecLess {
  bool operator()(const std::vector<Rational>& a,
                  const std::vector<Rational>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

// Best rational approximation with bounded denominator, from the continued
// fraction expansion.
inline std::optional<Rational> rationalize(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  double v = x;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fa = std::floor(v);
    if (std::fabs(fa) > 9e14) break;
    long long a = static_cast<long long>(fa);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_den || std::llabs(p2) > (1ll << 60)) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fa;
    if (frac < 1e-14) break;
    v = 1.0 / frac;
  }
  if (q1 < 1) return std::nullopt;
  return make_rational(p1, q1);
}

namespace detail {

// Linear model of one flattening of the derivative hypermatrix: the matrix
// entry (r, c) at the point p is sum_k lin[(r*cols + c)*dim + k] * p_k.
struct FlattenedModel {
  int dim = 0;
  int rows = 0;
  std::size_t cols = 0;
  std::vector<double> lin;
  // Minors used for the least squares objective, as (r1, r2, c1, c2).
  std::vector<std::array<std::size_t, 4>> minors;
};

inline std::optional<FlattenedModel> build_model(const Form& f) {
  const int dim = f.num_vars(), n = f.degree();
  if (dim < 2) return std::nullopt;
  FlattenedModel model;
  model.dim = dim;
  model.rows = dim;
  model.cols = 1;
  for (int k = 0; k < n - 2; ++k) model.cols *= static_cast<std::size_t>(dim);
  const std::size_t cells = static_cast<std::size_t>(model.rows) * model.cols;
  if (cells * static_cast<std::size_t>(dim) > 4000000) return std::nullopt;
  CoeffTensor ct = coeff_tensor(f);
  model.lin.assign(cells * static_cast<std::size_t>(dim), 0.0);
  // Tensor layout puts the flattening row first and the contracted slot
  // last, so the flat tensor index is (r * cols + c) * dim + k already.
  for (std::size_t t = 0; t < ct.tensor.size(); ++t)
    model.lin[t] = ct.tensor.flat(t).get_d();
  if (model.rows < 2 || model.cols < 2) return std::nullopt;
  std::vector<std::array<std::size_t, 4>> all;
  for (std::size_t r1 = 0; r1 + 1 < static_cast<std::size_t>(model.rows); ++r1)
    for (std::size_t r2 = r1 + 1; r2 < static_cast<std::size_t>(model.rows); ++r2)
      for (std::size_t c1 = 0; c1 + 1 < model.cols; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < model.cols; ++c2)
          all.push_back({r1, r2, c1, c2});
  const std::size_t cap = 20000;
  if (all.size() <= cap) {
    model.minors = std::move(all);
  } else {
    std::size_t stride = all.size() / cap + 1;
    for (std::size_t i = 0; i < all.size(); i += stride)
      model.minors.push_back(all[i]);
  }
  return model;
}

inline double fill_matrix(const FlattenedModel& m, const std::vector<double>& p,
                          std::vector<double>& out) {
  const std::size_t cells = static_cast<std::size_t>(m.rows) * m.cols;
  out.assign(cells, 0.0);
  double norm = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double acc = 0.0;
    const double* base = m.lin.data() + cell * static_cast<std::size_t>(m.dim);
    for (int k = 0; k < m.dim; ++k) acc += base[k] * p[static_cast<std::size_t>(k)];
    out[cell] = acc;
    norm += acc * acc;
  }
  return norm;
}

inline double objective(const FlattenedModel& m, const std::vector<double>& mat) {
  double total = 0.0;
  for (const auto& q : m.minors) {
    double a = mat[q[0] * m.cols + q[2]], b = mat[q[0] * m.cols + q[3]];
    double c = mat[q[1] * m.cols + q[2]], d = mat[q[1] * m.cols + q[3]];
    double res = a * d - b * c;
    total += res * res;
  }
  return total;
}

// One Levenberg-Marquardt descent on the sum of squared 2x2 minors over the
// unit sphere. Returns the final point and objective.
inline NumericCandidate descend(const FlattenedModel& m,
                                std::vector<double> p, int max_iterations) {
  const int dim = m.dim;
  auto normalize = [&](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s > 0) {
      for (double& x : v) x /= s;
    }
  };
  normalize(p);
  std::vector<double> mat, trial_mat;
  fill_matrix(m, p, mat);
  double obj = objective(m, mat);
  double lambda = 1e-3;
  std::vector<double> jtj(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  std::vector<double> jtr(static_cast<std::size_t>(dim));
  std::vector<double> grad_row(static_cast<std::size_t>(dim));
  for (int iter = 0; iter < max_iterations && obj > 1e-28; ++iter) {
    std::fill(jtj.begin(), jtj.end(), 0.0);
    std::fill(jtr.begin(), jtr.end(), 0.0);
    for (const auto& q : m.minors) {
      std::size_t ac = q[0] * m.cols + q[2], bc = q[0] * m.cols + q[3];
      std::size_t cc = q[1] * m.cols + q[2], dc = q[1] * m.cols + q[3];
      double a = mat[ac], b = mat[bc], c = mat[cc], d = mat[dc];
      double res = a * d - b * c;
      const double* la = m.lin.data() + ac * static_cast<std::size_t>(dim);
      const double* lb = m.lin.data() + bc * static_cast<std::size_t>(dim);
      const double* lc = m.lin.data() + cc * static_cast<std::size_t>(dim);
      const double* ld = m.lin.data() + dc * static_cast<std::size_t>(dim);
      for (int k = 0; k < dim; ++k)
        grad_row[static_cast<std::size_t>(k)] =
            la[k] * d + a * ld[k] - lb[k] * c - b * lc[k];
      for (int i = 0; i < dim; ++i) {
        jtr[static_cast<std::size_t>(i)] += grad_row[static_cast<std::size_t>(i)] * res;
        for (int j = i; j < dim; ++j)
          jtj[static_cast<std::size_t>(i * dim + j)] +=
              grad_row[static_cast<std::size_t>(i)] * grad_row[static_cast<std::size_t>(j)];
      }
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j)
        jtj[static_cast<std::size_t>(i * dim + j)] = jtj[static_cast<std::size_t>(j * dim + i)];
    bool stepped = false;
    for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
      // Solve (JtJ + lambda I) delta = -Jtr by Gaussian elimination.
      std::vector<double> a = jtj;
      std::vector<double> rhs(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) {
        a[static_cast<std::size_t>(i * dim + i)] += lambda;
        rhs[static_cast<std::size_t>(i)] = -jtr[static_cast<std::size_t>(i)];
      }
      bool singular = false;
      for (int col = 0; col < dim && !singular; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
          if (std::fabs(a[static_cast<std::size_t>(r * dim + col)]) >
              std::fabs(a[static_cast<std::size_t>(piv * dim + col)]))
            piv = r;
        if (std::fabs(a[static_cast<std::size_t>(piv * dim + col)]) < 1e-300) {
          singular = true;
          break;
        }
        if (piv != col) {
          for (int j = 0; j < dim; ++j)
            std::swap(a[static_cast<std::size_t>(col * dim + j)],
                      a[static_cast<std::size_t>(piv * dim + j)]);
          std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(piv)]);
        }
        for (int r = col + 1; r < dim; ++r) {
          double f = a[static_cast<std::size_t>(r * dim + col)] /
                     a[static_cast<std::size_t>(col * dim + col)];
          if (f == 0.0) continue;
          for (int j = col; j < dim; ++j)
            a[static_cast<std::size_t>(r * dim + j)] -=
                f * a[static_cast<std::size_t>(col * dim + j)];
          rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
        }
      }
      std::vector<double> delta(static_cast<std::size_t>(dim), 0.0);
      if (!singular) {
        for (int i = dim - 1; i >= 0; --i) {
          double s = rhs[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < dim; ++j)
            s -= a[static_cast<std::size_t>(i * dim + j)] * delta[static_cast<std::size_t>(j)];
          delta[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i * dim + i)];
        }
        std::vector<double> trial = p;
        for (int i = 0; i < dim; ++i) trial[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)];
        normalize(trial);
        fill_matrix(m, trial, trial_mat);
        double trial_obj = objective(m, trial_mat);
        if (trial_obj < obj) {
          p = std::move(trial);
          mat = trial_mat;
          obj = trial_obj;
          lambda = std::max(lambda / 3.0, 1e-12);
          stepped = true;
        }
      }
      if (!stepped) lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) break;
  }
  return NumericCandidate{std::move(p), obj};
}

struct NumericSearchOutput {
  std::vector<ProjPoint> certified;  // canonical, deduplicated
  std::vector<NumericCandidate> numeric_only;
};

// Multistart numeric search for rank-one points of the derivative
// hypermatrix, with exact certification of every rationalized candidate.
inline NumericSearchOutput numeric_member_search(const Form& f,
                                                 const WfSearchConfig& cfg) {
  NumericSearchOutput out;
  auto model = build_model(f);
  if (!model) return out;
  std::mt19937_64 rng(cfg.seed);
  auto unit_draw = [&]() {
    std::vector<double> p(static_cast<std::size_t>(model->dim));
    for (;;) {
      double s = 0.0;
      for (auto& x : p) {
        x = std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0;
        s += x * x;
      }
      if (s > 1e-3) return p;
    }
  };
  std::map<std::vector<Rational>, bool, RatVecLess> seen;
  std::map<std::vector<long long>, bool> seen_numeric;
  for (int start = 0; start < cfg.max_starts; ++start) {
    NumericCandidate cand = descend(*model, unit_draw(), cfg.max_iterations);
    if (!(cand.residual <= cfg.residual_tol)) continue;
    // Scale so the largest coordinate is exactly 1, then rationalize.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < cand.unit_point.size(); ++i)
      if (std::fabs(cand.unit_point[i]) > std::fabs(cand.unit_point[pivot]))
        pivot = i;
    std::vector<Rational> coords;
    bool ok = true;
    for (std::size_t i = 0; i < cand.unit_point.size(); ++i) {
      double ratio = cand.unit_point[i] / cand.unit_point[pivot];
      auto r = rationalize(ratio, cfg.rationalization_depth);
      if (!r) {
        ok = false;
        break;
      }
      coords.push_back(*r);
    }
    bool certified = false;
    if (ok && !is_zero_vector(coords)) {
      ProjPoint candidate = ProjPoint(coords).canonical();
      if (is_wf_member(f, candidate)) {
        if (!seen.count(candidate.coords())) {
          seen.emplace(candidate.coords(), true);
          out.certified.push_back(candidate);
        }
        certified = true;
      }
    }
    if (!certified) {
      std::vector<long long> key;
      for (double x : cand.unit_point)
        key.push_back(static_cast<long long>(std::llround(x * 1e7)));
      if (!seen_numeric.count(key)) {
        seen_numeric.emplace(key, true);
        out.numeric_only.push_back(cand);
      }
    }
  }
  return out;
}

}  // namespace detail

// All rank-one points reachable by repeatedly normalizing at a nonvanishing
// member and recursing into the x_0-free remainder. Every reported point is
// exactly certified against the input form.
inline std::vector<WfPoint> peel(const Form& f) {
  require(f.degree() >= 3, ErrorCode::degree_too_low, "peel needs degree >= 3");
  auto h = honest(f);
  require(h.honest, ErrorCode::not_honest,
          "peel is only meaningful for honest forms");

  // Returns certified points in the local coordinates of g.
  auto rec = [&](auto&& self, const Form& g) -> std::vector<ProjPoint> {
    std::vector<ProjPoint> out;
    if (g.is_zero()) return out;
    std::optional<WfPoint> pick;
    for (int i = 0; i < g.num_vars() && !pick; ++i) {
      auto w = is_wf_member(g, ProjPoint::basis(g.num_vars(), i));
      if (w && !is_zero(w->f_value)) pick = w;
    }
    if (!pick) {
      WfSearchConfig internal;
      internal.seed = 0x5EED0000ull + static_cast<std::uint64_t>(g.num_vars());
      internal.max_starts = 32;
      auto assist = detail::numeric_member_search(g, internal);
      for (const auto& cand : assist.certified) {
        auto w = is_wf_member(g, cand);
        if (w && !is_zero(w->f_value)) {
          if (!pick || canonical_less(w->point, pick->point)) pick = w;
        }
      }
    }
    if (!pick) return out;
    NormalFormResult nf = normal_form_at(g, *pick);
    require(nf.case_tag == "nonvanishing", ErrorCode::internal_check_failed,
            "nonvanishing member produced a vanishing normal form");
    out.push_back(pick->point);
    if (g.num_vars() >= 2 && !nf.residual.is_zero()) {
      Form sub = drop_variable(nf.residual, 0);
      for (const ProjPoint& q : self(self, sub)) {
        std::vector<Rational> lifted(static_cast<std::size_t>(g.num_vars()),
                                     Rational(0));
        const auto& qc = q.coords();
        for (std::size_t i = 0; i < qc.size(); ++i) lifted[i + 1] = qc[i];
        out.push_back(nf.change.apply(ProjPoint(lifted)));
      }
    }
    return out;
  };

  std::vector<WfPoint> result;
  for (const ProjPoint& p : rec(rec, f)) {
    auto w = is_wf_member(f, p);
    require(w.has_value() && !is_zero(w->f_value),
            ErrorCode::internal_check_failed,
            "lifted point failed recertification");
    result.push_back(*w);
  }
  require(static_cast<int>(result.size()) <= f.num_vars(),
          ErrorCode::internal_check_failed,
          "more nonvanishing points than the cap allows");
  return result;
}

// Certified search for the rank-one points of the derivative hypermatrix:
// exact coordinate probes and peeling first, then seeded multistart descent
// with exact certification of every rationalized candidate.
inline WfSearchResult wf_search(const Form& f, const WfSearchConfig& cfg = {}) {
  require(f.degree() >= 3, ErrorCode::degree_too_low,
          "search needs degree >= 3");
  auto h = honest(f);
  require(h.honest, ErrorCode::not_honest,
          "search cap only holds for honest forms");

  std::map<std::vector<Rational>, WfPoint, RatVecLess> found;
  auto add = [&](const WfPoint& w) { found.emplace(w.point.coords(), w); };

  for (int i = 0; i < f.num_vars(); ++i) {
    auto w = is_wf_member(f, ProjPoint::basis(f.num_vars(), i));
    if (w) add(*w);
  }
  for (const WfPoint& w : peel(f)) add(w);

  WfSearchResult result;
  auto numeric = detail::numeric_member_search(f, cfg);
  for (const ProjPoint& p : numeric.certified) {
    auto w = is_wf_member(f, p);
    require(w.has_value(), ErrorCode::internal_check_failed,
            "numeric candidate lost its certificate");
    add(*w);
  }
  result.numeric_only = std::move(numeric.numeric_only);

  int nonvanishing = 0;
  for (const auto& [key, w] : found) {
    if (!is_zero(w.f_value)) ++nonvanishing;
    result.certified.push_back(w);
  }
  require(nonvanishing <= f.num_vars(), ErrorCode::internal_check_failed,
          "certified nonvanishing points exceed the cap");
  result.complete = nonvanishing == f.num_vars();
  return result;
}

}  // namespace cupform
