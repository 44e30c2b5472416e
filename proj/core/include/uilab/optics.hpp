#pragma once

#include <complex>
#include <string>
#include <vector>

#include "uilab/errors.hpp"

namespace uilab {

/// Dimensionless coherent-state field amplitude.
using Amplitude = std::complex<double>;

/// The full system state: one coherent amplitude per optical mode.
///
/// Linear optics maps products of coherent states to products of coherent
/// states, so a plain amplitude vector is the exact state representation;
/// no entanglement structure can arise.
struct ModeRegister {
  std::vector<Amplitude> amps;
  std::vector<std::string> labels;  // optional; same length, unique entries

  static ModeRegister vacuum(int modes, std::vector<std::string> labels = {});

  int size() const noexcept { return static_cast<int>(amps.size()); }

  /// Sum of |amp|^2 over all modes (conserved by beam splitters).
  double total_intensity() const noexcept;

  /// Index of a labeled mode; throws IndexOutOfRange if absent.
  int index_of(const std::string& label) const;

  void validate() const;
};

/// One beam splitter: transmittivity plus an *ordered* mode pair.
///
/// The transformation on the pair (a, b) is
///   (alpha, beta) -> (sqrt(T) alpha + sqrt(R) beta,
///                     -sqrt(R) alpha + sqrt(T) beta),   R = 1 - T.
/// The first listed mode keeps sqrt(T) of its own amplitude; the sign
/// convention matters for the cancellation networks, so builders record
/// the mode order explicitly.
struct BeamSplitterSpec {
  double t;
  int mode_a;
  int mode_b;

  void validate(int mode_count) const;
};

/// An ordered beam-splitter sequence acting on a fixed number of modes.
struct Network {
  int mode_count = 0;
  std::vector<BeamSplitterSpec> elements;

  void validate() const;
};

/// Dense complex matrix acting on amplitude vectors (row-major).
/// Composed networks satisfy U^dagger U = I to ~1e-15.
struct UnitaryMatrix {
  int n = 0;
  std::vector<Amplitude> a;

  static UnitaryMatrix identity(int n);

  Amplitude& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Amplitude& at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }

  ModeRegister apply(const ModeRegister& reg) const;
  UnitaryMatrix operator*(const UnitaryMatrix& rhs) const;
  UnitaryMatrix adjoint() const;
};

/// Applies one beam splitter to a register; other modes are untouched.
ModeRegister apply_beamsplitter(const ModeRegister& reg,
                                const BeamSplitterSpec& bs);
void apply_beamsplitter_in_place(ModeRegister& reg, const BeamSplitterSpec& bs);

/// Folds every element of the network over the register, in order.
ModeRegister apply_network(const Network& net, ModeRegister reg);

/// Concentration network: k copies of |beta> interfere constructively into
/// |sqrt(k) beta> on mode 0, vacuum elsewhere. Element j (1-based) merges the
/// accumulated mode with copy j+1 at transmittivity j/(j+1). k = 1 gives an
/// empty network.
Network build_concentrator(int k);

/// Appends the concentration elements for `copies` modes starting at
/// `first_mode` to an existing network.
void append_concentrator(Network& net, int first_mode, int copies);

/// Product of the per-element embedded 2x2 blocks, in application order.
/// Applying the result to a register equals folding the elements.
UnitaryMatrix compose_network(const Network& net);

/// Max absolute entry of U^dagger U - I; the caller compares to a tolerance.
double check_unitarity(const UnitaryMatrix& u);

}  // namespace uilab
