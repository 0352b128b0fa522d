#include "tforge/fields.hpp"

namespace tforge {

CovJet<double> coframeJet(const PointFrame& f, int a, int order) {
  if (order > f.order) throw GeometryError("frame order too low for the requested jet");
  RawJet<double> raw;
  raw.order = std::min(order, 2);
  raw.v = Mv(f.ctx);
  for (int mu = 0; mu < 4; ++mu) raw.v.setCoeff(1u << mu, f.e[mu][a]);
  for (int rho = 0; rho < 4; ++rho) {
    raw.d[rho] = Mv(f.ctx);
    for (int mu = 0; mu < 4; ++mu) raw.d[rho].setCoeff(1u << mu, f.de[rho][mu][a]);
  }
  if (raw.order >= 2)
    for (int rho = 0; rho < 4; ++rho)
      for (int sig = 0; sig < 4; ++sig) {
        raw.dd[rho][sig] = Mv(f.ctx);
        for (int mu = 0; mu < 4; ++mu) raw.dd[rho][sig].setCoeff(1u << mu, f.dde[rho][sig][mu][a]);
      }
  return covariantJet(f, raw);
}

ExprField::Channel ExprField::makeChannel(const std::array<Expression, 16>& comps) {
  Channel ch;
  ch.v = comps;
  for (int r = 0; r < 4; ++r)
    for (int b = 0; b < 16; ++b) ch.d1[r][b] = comps[b].derivative(r);
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s)
      for (int b = 0; b < 16; ++b) {
        ch.d2[r][s][b] = ch.d1[r][b].derivative(s);
        if (s != r) ch.d2[s][r][b] = ch.d2[r][s][b];
      }
  return ch;
}

ExprField::ExprField(const std::array<Expression, 16>& re) : re_(makeChannel(re)) {}

ExprField::ExprField(const std::array<Expression, 16>& re, const std::array<Expression, 16>& im)
    : re_(makeChannel(re)), im_(makeChannel(im)) {}

void ExprField::fill(const Channel& ch, const std::array<double, 4>& x, int order,
                     RawJet<double>& out) {
  out.order = order;
  for (int b = 0; b < 16; ++b) out.v.setCoeff(b, ch.v[b].evaluate(x));
  if (order >= 1)
    for (int r = 0; r < 4; ++r)
      for (int b = 0; b < 16; ++b) out.d[r].setCoeff(b, ch.d1[r][b].evaluate(x));
  if (order >= 2)
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s)
        for (int b = 0; b < 16; ++b) out.dd[r][s].setCoeff(b, ch.d2[r][s][b].evaluate(x));
}

RawJet<double> ExprField::rawJetReal(const PointFrame& f, int order) const {
  if (im_) throw AlgebraError("field has an imaginary channel; use rawJet");
  if (order > 2) throw GeometryError("expression fields cache derivatives to order 2");
  RawJet<double> out;
  out.v = Mv(f.ctx);
  for (auto& m : out.d) m = Mv(f.ctx);
  for (auto& r : out.dd)
    for (auto& m : r) m = Mv(f.ctx);
  fill(re_, f.x, order, out);
  return out;
}

RawJet<Complex> ExprField::rawJet(const PointFrame& f, int order) const {
  if (order > 2) throw GeometryError("expression fields cache derivatives to order 2");
  RawJet<double> re;
  re.v = Mv(f.ctx);
  for (auto& m : re.d) m = Mv(f.ctx);
  for (auto& r : re.dd)
    for (auto& m : r) m = Mv(f.ctx);
  fill(re_, f.x, order, re);

  RawJet<Complex> out;
  out.order = order;
  out.v = complexify(re.v);
  for (int r = 0; r < 4; ++r) out.d[r] = complexify(re.d[r]);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) out.dd[r][s] = complexify(re.dd[r][s]);

  if (im_) {
    RawJet<double> im;
    im.v = Mv(f.ctx);
    for (auto& m : im.d) m = Mv(f.ctx);
    for (auto& r : im.dd)
      for (auto& m : r) m = Mv(f.ctx);
    fill(*im_, f.x, order, im);
    const Complex unit(0.0, 1.0);
    out.v += complexify(im.v) * unit;
    if (order >= 1)
      for (int r = 0; r < 4; ++r) out.d[r] += complexify(im.d[r]) * unit;
    if (order >= 2)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) out.dd[r][s] += complexify(im.dd[r][s]) * unit;
  }
  return out;
}

CovJet<double> ExprField::covJetReal(const PointFrame& f, int order) const {
  return covariantJet(f, rawJetReal(f, order));
}

CovJet<Complex> ExprField::covJet(const PointFrame& f, int order) const {
  return covariantJet(f, rawJet(f, order));
}

}  // namespace tforge
