#include "qcap/kraus.hpp"

#include <cmath>

namespace qcap {

namespace {

void require_valid(const QuiverDatum& datum) {
  const std::vector<Finding> findings = validate(datum);
  for (const Finding& f : findings)
    if (f.severity == Finding::Severity::Error) {
      if (f.message.rfind("weight-dimension balance", 0) == 0) throw Imbalance(f.message);
      throw DimensionMismatch(describe(findings));
    }
}

Matrix extract_block(const Matrix& x, int row0, int rows, int col0, int cols) {
  Matrix b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = x(row0 + i, col0 + j);
  return b;
}

void add_block(Matrix& x, int row0, int col0, const Matrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) x(row0 + i, col0 + j) += b(i, j);
}

}  // namespace

IndexLayout build_layout(const QuiverDatum& datum) {
  require_valid(datum);
  IndexLayout lay;
  lay.N = datum.total_dim_plus();

  int q = 0, off = 0;
  for (int j = 0; j < datum.quiver.m; ++j) {
    const int count = datum.sigma.sigma_minus[j];
    lay.iminus.emplace_back(q, q + count);
    for (int t = 0; t < count; ++t) {
      lay.qblock_sink.push_back(j);
      lay.qblock_offset.push_back(off);
      off += datum.beta.beta_minus[j];
      ++q;
    }
  }
  lay.M = q;

  int r = 0;
  off = 0;
  for (int i = 0; i < datum.quiver.k; ++i) {
    const int count = datum.sigma.sigma_plus[i];
    lay.iplus.emplace_back(r, r + count);
    for (int t = 0; t < count; ++t) {
      lay.rblock_source.push_back(i);
      lay.rblock_offset.push_back(off);
      off += datum.beta.beta_plus[i];
      ++r;
    }
  }
  lay.Mprime = r;
  return lay;
}

KrausSystem build_kraus(const QuiverDatum& datum) {
  KrausSystem ks;
  ks.layout = build_layout(datum);
  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const auto [qb, qe] = ks.layout.iminus[ar.sink];
    const auto [rb, re] = ks.layout.iplus[ar.source];
    for (int q = qb; q < qe; ++q)
      for (int r = rb; r < re; ++r)
        ks.ops.push_back({ar.source, ar.sink, static_cast<int>(a), q, r, datum.rep.maps[a]});
  }
  return ks;
}

Matrix apply_T(const KrausSystem& ks, const Matrix& x) {
  const IndexLayout& lay = ks.layout;
  if (x.rows() != lay.N || x.cols() != lay.N)
    throw DimensionMismatch("apply_T: X must be " + std::to_string(lay.N) + "x" +
                            std::to_string(lay.N));
  Matrix out(lay.N, lay.N);
  for (const KrausDescriptor& op : ks.ops) {
    const int qo = lay.qblock_offset[op.q];
    const int ro = lay.rblock_offset[op.r];
    const int h = op.block.rows();
    // K^T X K touches only the (q, q) diagonal block of X and lands in the
    // (r, r) diagonal block of the result.
    const Matrix xqq = extract_block(x, qo, h, qo, h);
    add_block(out, ro, ro, sandwich_tn(op.block, xqq));
  }
  return symmetrize(out);
}

Matrix apply_T_star(const KrausSystem& ks, const Matrix& x) {
  const IndexLayout& lay = ks.layout;
  if (x.rows() != lay.N || x.cols() != lay.N)
    throw DimensionMismatch("apply_T_star: X must be " + std::to_string(lay.N) + "x" +
                            std::to_string(lay.N));
  Matrix out(lay.N, lay.N);
  for (const KrausDescriptor& op : ks.ops) {
    const int qo = lay.qblock_offset[op.q];
    const int ro = lay.rblock_offset[op.r];
    const int w = op.block.cols();
    const Matrix xrr = extract_block(x, ro, w, ro, w);
    add_block(out, qo, qo, sandwich_nt(op.block, xrr));
  }
  return symmetrize(out);
}

std::pair<std::vector<double>, std::vector<double>> ds_residual(const QuiverDatum& datum) {
  const int k = datum.quiver.k;
  const int m = datum.quiver.m;
  std::vector<Matrix> src(k);
  std::vector<Matrix> snk(m);
  for (int i = 0; i < k; ++i) src[i] = Matrix(datum.beta.beta_plus[i], datum.beta.beta_plus[i]);
  for (int j = 0; j < m; ++j) snk[j] = Matrix(datum.beta.beta_minus[j], datum.beta.beta_minus[j]);

  for (std::size_t a = 0; a < datum.quiver.arrows.size(); ++a) {
    const Arrow& ar = datum.quiver.arrows[a];
    const Matrix& v = datum.rep.maps[a];
    add_scaled(src[ar.source], static_cast<double>(datum.sigma.sigma_minus[ar.sink]),
               multiply_tn(v, v));
    add_scaled(snk[ar.sink], static_cast<double>(datum.sigma.sigma_plus[ar.source]),
               multiply_nt(v, v));
  }

  std::pair<std::vector<double>, std::vector<double>> out;
  for (int i = 0; i < k; ++i)
    out.first.push_back(frobenius_norm(src[i] - Matrix::identity(src[i].rows())));
  for (int j = 0; j < m; ++j)
    out.second.push_back(frobenius_norm(snk[j] - Matrix::identity(snk[j].rows())));
  return out;
}

}  // namespace qcap
