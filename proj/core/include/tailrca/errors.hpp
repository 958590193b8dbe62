// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tailrca {

/// Base class for all tailrca errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A required raw stream carried no samples.
struct EmptyStream : Error {
    using Error::Error;
};

/// A raw stream had no sample within max_gap of a grid point (collector dropout).
struct GapTooLarge : Error {
    using Error::Error;
};

/// Too few samples to compute baseline statistics.
struct InsufficientBaseline : Error {
    using Error::Error;
};

/// Requested window extends beyond the series.
struct WindowOutOfRange : Error {
    using Error::Error;
};

/// Series is constant after mean subtraction; correlation undefined.
struct DegenerateSeries : Error {
    using Error::Error;
};

/// No sample in the window exceeds the spike threshold.
struct NoOnset : Error {
    using Error::Error;
};

/// Scenario is internally inconsistent (e.g. disturbance past trace end).
struct InvalidScenario : Error {
    using Error::Error;
};

/// Trace records handed to the writer were not ordered.
struct WriteOrderError : Error {
    using Error::Error;
};

/// A trace line failed to parse; carries the 1-based line number.
struct MalformedRecord : Error {
    MalformedRecord(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_no(line) {}
    std::size_t line_no;
};

/// Timestamp regression within one metric of a trace.
struct OrderViolation : Error {
    using Error::Error;
};

/// Bad configuration file or parameter value.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace tailrca
