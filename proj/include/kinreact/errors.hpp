#pragma once

#include <stdexcept>
#include <string>

namespace kinreact {

// Mesh construction
struct EvenSpatialGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonPositiveExtent : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Velocity profiles
struct NonPositiveProfile : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Implicit stepping
struct PicardDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BoundsRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularTransportSolve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Poisson solve
struct EvenGridUnsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Entropy functionals
struct NonPositiveState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Decay fitting
struct NonPositiveSeries : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct WindowTooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Configuration
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kinreact
