#pragma once

#include "sadrc/oscillator.hpp"

namespace sadrc {

enum class SpectralMethod
{
    dense_schur,         // Hessenberg QR on the dense matrix; exact up to rounding
    subspace_iteration,  // block power iteration with Rayleigh-Ritz projection
};

struct SpectralRadiusSettings
{
    SpectralMethod method = SpectralMethod::dense_schur;
    double tolerance = 1e-10;       // relative change of the estimate between sweeps
    int max_iterations = 1000;
    double zero_threshold = 1e-12;  // radii below this are treated as zero; rescale is skipped
    int block_size = 6;             // width of the iterated subspace (clipped to n)

    void validate() const;
};

/// Reusable iteration subspace for subspace_iteration. Passing the same workspace
/// to consecutive calls on slowly changing matrices starts each solve from the
/// previous subspace.
struct SpectralWorkspace
{
    Matrix basis;
};

/// Largest eigenvalue modulus of a square real matrix.
///
/// dense_schur reduces K to real Schur form, which resolves complex-conjugate
/// pairs and clustered moduli alike. subspace_iteration runs block power
/// iteration with a Rayleigh-Ritz projection onto the iterated block, so real
/// dominant eigenvalues and complex dominant pairs are both resolved without
/// complex arithmetic on K; it converges at rate |lambda_{p+1} / lambda_1| and
/// throws SpectralRadiusError (carrying the best estimate) when the estimate has
/// not settled to `tolerance` after `max_iterations` sweeps.
double spectral_radius(const Matrix& k, const SpectralRadiusSettings& settings = {},
                       SpectralWorkspace* workspace = nullptr);

/// Same, applying K through the network's live edges only.
double spectral_radius(const OscillatorNetwork& net, const SpectralRadiusSettings& settings = {},
                       SpectralWorkspace* workspace = nullptr);

/// Scale K so that its spectral radius equals `target`. Skipped when the current
/// radius is below settings.zero_threshold. Returns the radius measured before scaling.
double rescale_to_radius(OscillatorNetwork& net, double target,
                         const SpectralRadiusSettings& settings = {},
                         SpectralWorkspace* workspace = nullptr);

} // namespace sadrc
