#pragma once

#include <stdexcept>
#include <string>

namespace gfc {

// Configuration problems (unknown group, bad preset, malformed key).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transform or synthesis was requested beyond the grid's exactness limit.
// Operations refuse instead of silently degrading so that the Parseval and
// orthogonality guarantees stay meaningful.
struct BandlimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures: singular powers, contour touching the spectrum,
// ill-conditioned Gramians, exhausted exponent ranges.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sinh trajectories past the IEEE double range.
struct MagnitudeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gfc
