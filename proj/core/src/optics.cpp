#include "uilab/optics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace uilab {

ModeRegister ModeRegister::vacuum(int modes, std::vector<std::string> labels) {
  if (modes < 1) throw IndexOutOfRange("vacuum: need at least one mode");
  ModeRegister reg;
  reg.amps.assign(static_cast<std::size_t>(modes), Amplitude{0.0, 0.0});
  reg.labels = std::move(labels);
  reg.validate();
  return reg;
}

double ModeRegister::total_intensity() const noexcept {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

int ModeRegister::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw IndexOutOfRange("no mode labeled '" + label + "'");
  }
  return static_cast<int>(it - labels.begin());
}

void ModeRegister::validate() const {
  if (amps.empty()) throw IndexOutOfRange("register must hold at least one mode");
  if (!labels.empty()) {
    if (labels.size() != amps.size()) {
      throw IndexOutOfRange("label list length differs from amplitude count");
    }
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size()) {
      throw IndexOutOfRange("mode labels must be unique");
    }
  }
}

void BeamSplitterSpec::validate(int mode_count) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidTransmittivity("transmittivity must lie in [0, 1]");
  }
  if (mode_a < 0 || mode_b < 0 || mode_a >= mode_count || mode_b >= mode_count) {
    throw IndexOutOfRange("beam splitter mode index out of range");
  }
  if (mode_a == mode_b) {
    throw IndexOutOfRange("beam splitter modes must be distinct");
  }
}

void Network::validate() const {
  if (mode_count < 1) throw IndexOutOfRange("network needs at least one mode");
  for (const auto& e : elements) e.validate(mode_count);
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
  UnitaryMatrix u;
  u.n = n;
  u.a.assign(static_cast<std::size_t>(n) * n, Amplitude{0.0, 0.0});
  for (int i = 0; i < n; ++i) u.at(i, i) = 1.0;
  return u;
}

ModeRegister UnitaryMatrix::apply(const ModeRegister& reg) const {
  if (reg.size() != n) throw IndexOutOfRange("matrix/register size mismatch");
  ModeRegister out = reg;
  for (int i = 0; i < n; ++i) {
    Amplitude s{0.0, 0.0};
    for (int j = 0; j < n; ++j) s += at(i, j) * reg.amps[j];
    out.amps[i] = s;
  }
  return out;
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& rhs) const {
  if (n != rhs.n) throw IndexOutOfRange("matrix size mismatch");
  UnitaryMatrix out;
  out.n = n;
  out.a.assign(static_cast<std::size_t>(n) * n, Amplitude{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Amplitude lik = at(i, k);
      if (lik == Amplitude{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) += lik * rhs.at(k, j);
    }
  }
  return out;
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  UnitaryMatrix out;
  out.n = n;
  out.a.assign(a.size(), Amplitude{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.at(j, i) = std::conj(at(i, j));
  }
  return out;
}

void apply_beamsplitter_in_place(ModeRegister& reg, const BeamSplitterSpec& bs) {
  bs.validate(reg.size());
  const double st = std::sqrt(bs.t);
  const double sr = std::sqrt(1.0 - bs.t);
  const Amplitude alpha = reg.amps[bs.mode_a];
  const Amplitude beta = reg.amps[bs.mode_b];
  reg.amps[bs.mode_a] = st * alpha + sr * beta;
  reg.amps[bs.mode_b] = -sr * alpha + st * beta;
}

ModeRegister apply_beamsplitter(const ModeRegister& reg,
                                const BeamSplitterSpec& bs) {
  ModeRegister out = reg;
  apply_beamsplitter_in_place(out, bs);
  return out;
}

ModeRegister apply_network(const Network& net, ModeRegister reg) {
  net.validate();
  if (reg.size() != net.mode_count) {
    throw IndexOutOfRange("network/register size mismatch");
  }
  for (const auto& e : net.elements) apply_beamsplitter_in_place(reg, e);
  return reg;
}

void append_concentrator(Network& net, int first_mode, int copies) {
  if (copies < 1) throw InvalidCopyCount("concentrator needs at least one copy");
  for (int j = 1; j < copies; ++j) {
    // merge accumulated sqrt(j) beta with the next copy: sqrt(j+1) beta
    net.elements.push_back(BeamSplitterSpec{
        static_cast<double>(j) / (j + 1), first_mode, first_mode + j});
  }
}

Network build_concentrator(int k) {
  if (k < 1) throw InvalidCopyCount("concentrator needs at least one copy");
  Network net;
  net.mode_count = k;
  append_concentrator(net, 0, k);
  net.validate();
  return net;
}

UnitaryMatrix compose_network(const Network& net) {
  net.validate();
  UnitaryMatrix u = UnitaryMatrix::identity(net.mode_count);
  for (const auto& e : net.elements) {
    UnitaryMatrix block = UnitaryMatrix::identity(net.mode_count);
    const double st = std::sqrt(e.t);
    const double sr = std::sqrt(1.0 - e.t);
    block.at(e.mode_a, e.mode_a) = st;
    block.at(e.mode_a, e.mode_b) = sr;
    block.at(e.mode_b, e.mode_a) = -sr;
    block.at(e.mode_b, e.mode_b) = st;
    u = block * u;
  }
  return u;
}

double check_unitarity(const UnitaryMatrix& u) {
  const UnitaryMatrix prod = u.adjoint() * u;
  double defect = 0.0;
  for (int i = 0; i < u.n; ++i) {
    for (int j = 0; j < u.n; ++j) {
      const Amplitude expect = (i == j) ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
      defect = std::max(defect, std::abs(prod.at(i, j) - expect));
    }
  }
  return defect;
}

}  // namespace uilab
