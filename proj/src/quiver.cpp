#include "qcap/quiver.hpp"

#include <cmath>
#include <numeric>

namespace qcap {

int QuiverDatum::total_dim_plus() const {
  int n = 0;
  for (std::size_t i = 0; i < beta.beta_plus.size(); ++i)
    n += sigma.sigma_plus[i] * beta.beta_plus[i];
  return n;
}

int QuiverDatum::total_dim_minus() const {
  int n = 0;
  for (std::size_t j = 0; j < beta.beta_minus.size(); ++j)
    n += sigma.sigma_minus[j] * beta.beta_minus[j];
  return n;
}

bool QuiverDatum::is_zero_representation() const {
  for (const Matrix& m : rep.maps)
    if (max_abs(m) != 0.0) return false;
  return true;
}

namespace {

void check_counts(const QuiverDatum& d, std::vector<Finding>& out) {
  const std::size_t k = static_cast<std::size_t>(d.quiver.k);
  const std::size_t m = static_cast<std::size_t>(d.quiver.m);
  if (d.quiver.k <= 0 || d.quiver.m <= 0)
    out.push_back({Finding::Severity::Error, "quiver needs at least one source and one sink"});
  if (d.sigma.sigma_plus.size() != k || d.sigma.sigma_minus.size() != m)
    out.push_back({Finding::Severity::Error, "weight length does not match vertex counts"});
  if (d.beta.beta_plus.size() != k || d.beta.beta_minus.size() != m)
    out.push_back({Finding::Severity::Error, "dimension vector length does not match vertex counts"});
  if (d.rep.maps.size() != d.quiver.arrows.size())
    out.push_back({Finding::Severity::Error, "representation has a map count different from the arrow count"});
}

bool connected(const BipartiteQuiver& q) {
  // Union-find over k + m vertices; sinks are offset by k.
  std::vector<int> parent(q.k + q.m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Arrow& a : q.arrows) parent[find(a.source)] = find(q.k + a.sink);
  const int root = find(0);
  for (int v = 1; v < q.k + q.m; ++v)
    if (find(v) != root) return false;
  return true;
}

}  // namespace

std::vector<Finding> validate(const QuiverDatum& d) {
  std::vector<Finding> out;
  check_counts(d, out);
  if (!out.empty()) return out;  // later checks index into these vectors

  for (std::size_t i = 0; i < d.sigma.sigma_plus.size(); ++i)
    if (d.sigma.sigma_plus[i] <= 0)
      out.push_back({Finding::Severity::Error,
                     "sigma_plus[" + std::to_string(i + 1) + "] must be a positive integer"});
  for (std::size_t j = 0; j < d.sigma.sigma_minus.size(); ++j)
    if (d.sigma.sigma_minus[j] <= 0)
      out.push_back({Finding::Severity::Error,
                     "sigma_minus[" + std::to_string(j + 1) + "] must be a positive integer"});
  for (std::size_t i = 0; i < d.beta.beta_plus.size(); ++i)
    if (d.beta.beta_plus[i] <= 0)
      out.push_back({Finding::Severity::Error,
                     "beta_plus[" + std::to_string(i + 1) + "] must be positive"});
  for (std::size_t j = 0; j < d.beta.beta_minus.size(); ++j)
    if (d.beta.beta_minus[j] <= 0)
      out.push_back({Finding::Severity::Error,
                     "beta_minus[" + std::to_string(j + 1) + "] must be positive"});
  if (!out.empty()) return out;

  const int np = d.total_dim_plus();
  const int nm = d.total_dim_minus();
  if (np != nm)
    out.push_back({Finding::Severity::Error,
                   "weight-dimension balance fails: sigma_plus.beta_plus = " + std::to_string(np) +
                       " but sigma_minus.beta_minus = " + std::to_string(nm)});

  for (std::size_t a = 0; a < d.quiver.arrows.size(); ++a) {
    const Arrow& ar = d.quiver.arrows[a];
    if (ar.source < 0 || ar.source >= d.quiver.k || ar.sink < 0 || ar.sink >= d.quiver.m) {
      out.push_back({Finding::Severity::Error,
                     "arrow " + std::to_string(a + 1) + " references a vertex out of range"});
      continue;
    }
    const Matrix& v = d.rep.maps[a];
    if (v.rows() != d.beta.beta_minus[ar.sink] || v.cols() != d.beta.beta_plus[ar.source])
      out.push_back({Finding::Severity::Error,
                     "arrow " + std::to_string(a + 1) + " map has shape " + std::to_string(v.rows()) +
                         "x" + std::to_string(v.cols()) + ", expected " +
                         std::to_string(d.beta.beta_minus[ar.sink]) + "x" +
                         std::to_string(d.beta.beta_plus[ar.source])});
    else if (!all_finite(v))
      out.push_back({Finding::Severity::Error,
                     "arrow " + std::to_string(a + 1) + " map has non-finite entries"});
  }

  if (!connected(d.quiver))
    out.push_back({Finding::Severity::Error, "quiver is not connected"});

  if (d.is_zero_representation())
    out.push_back({Finding::Severity::Warning, "representation is identically zero"});

  return out;
}

bool is_valid(const QuiverDatum& d) {
  for (const Finding& f : validate(d))
    if (f.severity == Finding::Severity::Error) return false;
  return true;
}

std::string describe(const std::vector<Finding>& findings) {
  std::string s;
  for (const Finding& f : findings) {
    if (!s.empty()) s += "; ";
    s += (f.severity == Finding::Severity::Error ? "error: " : "warning: ") + f.message;
  }
  return s;
}

std::vector<Finding> validate_ajn(const AjnDatum& ajn) {
  std::vector<Finding> out;
  const std::size_t k = ajn.d.size();
  const std::size_t m = ajn.n.size();
  if (k == 0 || m == 0)
    out.push_back({Finding::Severity::Error, "AJN datum needs k >= 1 and m >= 1"});
  if (ajn.c.size() != k || ajn.p.size() != m)
    out.push_back({Finding::Severity::Error, "exponent length does not match dimension tuples"});
  if (ajn.A.size() != k)
    out.push_back({Finding::Severity::Error, "map table must have one row per source"});
  else
    for (std::size_t i = 0; i < k; ++i)
      if (ajn.A[i].size() != m)
        out.push_back({Finding::Severity::Error,
                       "map table row " + std::to_string(i + 1) + " must have one entry per sink"});
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < k; ++i) {
    if (ajn.d[i] <= 0) out.push_back({Finding::Severity::Error, "d[" + std::to_string(i + 1) + "] must be positive"});
    if (ajn.c[i] <= 0) out.push_back({Finding::Severity::Error, "c[" + std::to_string(i + 1) + "] must be a positive integer"});
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (ajn.n[j] <= 0) out.push_back({Finding::Severity::Error, "n[" + std::to_string(j + 1) + "] must be positive"});
    if (ajn.p[j] <= 0) out.push_back({Finding::Severity::Error, "p[" + std::to_string(j + 1) + "] must be a positive integer"});
  }
  if (!out.empty()) return out;

  long cd = 0, pn = 0;
  for (std::size_t i = 0; i < k; ++i) cd += static_cast<long>(ajn.c[i]) * ajn.d[i];
  for (std::size_t j = 0; j < m; ++j) pn += static_cast<long>(ajn.p[j]) * ajn.n[j];
  if (cd != pn)
    out.push_back({Finding::Severity::Error,
                   "balance fails: sum c_i d_i = " + std::to_string(cd) +
                       " but sum p_j n_j = " + std::to_string(pn)});

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Matrix& a = ajn.A[i][j];
      if (a.rows() != ajn.n[j] || a.cols() != ajn.d[i])
        out.push_back({Finding::Severity::Error,
                       "A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "] has shape " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", expected " +
                           std::to_string(ajn.n[j]) + "x" + std::to_string(ajn.d[i])});
      else if (!all_finite(a))
        out.push_back({Finding::Severity::Error,
                       "A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                           "] has non-finite entries"});
    }
  if (!out.empty()) return out;

  const std::vector<bool> surj = check_surjective(ajn);
  for (std::size_t j = 0; j < m; ++j)
    if (!surj[j])
      out.push_back({Finding::Severity::Error,
                     "stacked map A_" + std::to_string(j + 1) + " = [A_1j ... A_kj] is not surjective"});
  return out;
}

std::vector<bool> check_surjective(const AjnDatum& ajn, double tol) {
  const int k = static_cast<int>(ajn.d.size());
  const int m = static_cast<int>(ajn.n.size());
  int total_d = 0;
  for (int di : ajn.d) total_d += di;

  std::vector<bool> out(m);
  for (int j = 0; j < m; ++j) {
    Matrix stacked(ajn.n[j], total_d);
    int col0 = 0;
    for (int i = 0; i < k; ++i) {
      const Matrix& a = ajn.A[i][j];
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) stacked(r, col0 + c) = a(r, c);
      col0 += ajn.d[i];
    }
    out[j] = rank(stacked, tol) == ajn.n[j];
  }
  return out;
}

QuiverDatum from_ajn(const AjnDatum& ajn) {
  const std::vector<Finding> findings = validate_ajn(ajn);
  for (const Finding& f : findings)
    if (f.severity == Finding::Severity::Error) throw InvalidAjn(describe(findings));

  QuiverDatum d;
  d.quiver.k = static_cast<int>(ajn.d.size());
  d.quiver.m = static_cast<int>(ajn.n.size());
  d.beta.beta_plus = ajn.d;
  d.beta.beta_minus = ajn.n;
  d.sigma.sigma_plus = ajn.c;
  d.sigma.sigma_minus = ajn.p;
  for (int i = 0; i < d.quiver.k; ++i) {
    const double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(ajn.c[i]));
    for (int j = 0; j < d.quiver.m; ++j) {
      d.quiver.arrows.push_back({i, j});
      d.rep.maps.push_back(inv_sqrt_c * ajn.A[i][j]);
    }
  }
  return d;
}

}  // namespace qcap
