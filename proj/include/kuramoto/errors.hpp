#pragma once

#include <stdexcept>
#include <string>

namespace kuramoto {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// State/parameter lengths do not match, or an index is out of range.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// A spin lies off the e1-e2 plane where a planar angle was required.
struct NonPlanarInput : Error {
    explicit NonPlanarInput(const std::string& msg) : Error(msg) {}
};

/// A complex state entry is not on the unit circle.
struct NonUnimodularInput : Error {
    explicit NonUnimodularInput(const std::string& msg) : Error(msg) {}
};

/// Adaptive step size underflowed dt_min; stiffness or bad parameters.
struct StepFailure : Error {
    explicit StepFailure(const std::string& msg) : Error(msg) {}
};

/// A trailing-window computation was asked for more data than recorded.
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

/// Operation requires lambda > 0.
struct ZeroCoupling : Error {
    explicit ZeroCoupling(const std::string& msg) : Error(msg) {}
};

/// A residual's denominator vanished (e.g. fully aligned state).
struct DegenerateDenominator : Error {
    explicit DegenerateDenominator(const std::string& msg) : Error(msg) {}
};

/// Two distinct indices were required.
struct SameIndex : Error {
    explicit SameIndex(const std::string& msg) : Error(msg) {}
};

/// A rate formula left its real domain (no locked equilibrium).
struct ImaginaryRate : Error {
    explicit ImaginaryRate(const std::string& msg) : Error(msg) {}
};

/// Experiment configuration is malformed or inconsistent.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Output file could not be created or written.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace kuramoto
