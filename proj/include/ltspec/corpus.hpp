#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ltspec/potential.hpp"
#include "ltspec/spectrum.hpp"

namespace ltspec {

struct NamedSpec {
  std::string name;
  PotentialSpec spec;
};

inline PotentialSpec spec_square_well(double depth, double width, double spacing = 1e-3) {
  PotentialSpec s;
  s.kind = PotentialKind::square_well;
  s.depth = depth;
  s.width = width;
  s.target_spacing = spacing;
  return s;
}

// A bump-envelope well: sigma much wider than the cutoff leaves an almost
// pure C-infinity bump of the given amplitude.
inline PotentialSpec spec_bump_well(double amplitude, double cutoff, double spacing = 1e-3) {
  PotentialSpec s;
  s.kind = PotentialKind::truncated_gaussian;
  s.amplitude = amplitude;
  s.sigma = 10.0 * cutoff;
  s.cutoff = cutoff;
  s.target_spacing = spacing;
  return s;
}

inline PotentialSpec spec_gaussian_well(double amplitude, double sigma, double cutoff,
                                        double spacing = 1e-3) {
  PotentialSpec s;
  s.kind = PotentialKind::truncated_gaussian;
  s.amplitude = amplitude;
  s.sigma = sigma;
  s.cutoff = cutoff;
  s.target_spacing = spacing;
  return s;
}

inline PotentialSpec spec_identity_tensor(const PotentialSpec& scalar, int n) {
  PotentialSpec s;
  s.kind = PotentialKind::scalar_times_identity;
  s.n = n;
  s.scalar = std::make_shared<PotentialSpec>(scalar);
  s.target_spacing = scalar.target_spacing;
  return s;
}

inline PotentialSpec spec_random_hermitian(int n, std::uint64_t seed, double scale,
                                           double spacing = 1e-3) {
  PotentialSpec s;
  s.kind = PotentialKind::random_hermitian;
  s.n = n;
  s.seed = seed;
  s.scale = scale;
  s.target_spacing = spacing;
  return s;
}

/// Smooth corpus, n in {1, 2, 3}: the potentials every scattering-algebra and
/// sum-rule check runs over. All entries pass the zero-energy resonance
/// screen |det A(i 1e-3)| >= 0.1.
inline std::vector<NamedSpec> corpus_smooth() {
  return {
      {"bump4", spec_bump_well(4.0, 1.0)},
      {"bump2", spec_bump_well(2.0, 1.0)},
      {"gauss3", spec_gaussian_well(3.0, 0.5, 1.25)},
      {"id2_bump", spec_identity_tensor(spec_bump_well(2.5, 1.0), 2)},
      {"rand2", spec_random_hermitian(2, 7, 1.5)},
      {"rand2b", spec_random_hermitian(2, 11, 1.0)},
      {"rand3", spec_random_hermitian(3, 3, 1.2)},
  };
}

/// Piecewise-constant wells for bound-state and Weyl checks.
inline std::vector<NamedSpec> corpus_wells() {
  return {
      {"well_shallow", spec_square_well(0.5, 1.0)},
      {"well4", spec_square_well(4.0, 1.0)},
      {"id3_well", spec_identity_tensor(spec_square_well(4.0, 1.0), 3)},
  };
}

inline std::vector<NamedSpec> corpus_all() {
  std::vector<NamedSpec> all = corpus_smooth();
  for (auto& w : corpus_wells()) all.push_back(w);
  return all;
}

/// 2D scalar test fields for the d = 2 ratio and the lifting chain.
inline ScalarField2D field2d_gaussian_well(double amplitude = 8.0, double cutoff = 1.5) {
  ScalarField2D v;
  v.x1_lo = v.x2_lo = -1.5 - 2.0;
  v.x1_hi = v.x2_hi = 1.5 + 2.0;
  v.f = [amplitude, cutoff](double x1, double x2) {
    return -amplitude * bump(x1 / cutoff) * bump(x2 / cutoff);
  };
  return v;
}

inline ScalarField2D field2d_separable_wells(double depth = 6.0, double cutoff = 1.2) {
  ScalarField2D v;
  v.x1_lo = v.x2_lo = -1.2 - 2.0;
  v.x1_hi = v.x2_hi = 1.2 + 2.0;
  v.f = [depth, cutoff](double x1, double x2) {
    return -depth * (bump(x1 / cutoff) + bump(x2 / cutoff));
  };
  return v;
}

}  // namespace ltspec
