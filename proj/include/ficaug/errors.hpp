#pragma once

#include <stdexcept>
#include <string>

namespace ficaug {

// Two error families, matching the CLI exit codes: problems with the
// configuration, schema, or input files exit with code 2; runtime and
// numeric failures exit with code 3.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : ConfigError {
    using ConfigError::ConfigError;
};

struct IngestionError : ConfigError {
    using ConfigError::ConfigError;
};

struct DatasetError : ConfigError {
    using ConfigError::ConfigError;
};

struct FoldError : ConfigError {
    using ConfigError::ConfigError;
};

struct InfeasibleError : ConfigError {
    using ConfigError::ConfigError;
};

struct ArgumentError : ConfigError {
    using ConfigError::ConfigError;
};

struct ReportError : ConfigError {
    using ConfigError::ConfigError;
};

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : RuntimeFailure {
    using RuntimeFailure::RuntimeFailure;
};

struct StateError : RuntimeFailure {
    using RuntimeFailure::RuntimeFailure;
};

struct TrainingError : RuntimeFailure {
    using RuntimeFailure::RuntimeFailure;
};

struct DegenerateGeometryError : RuntimeFailure {
    using RuntimeFailure::RuntimeFailure;
};

struct ExportError : RuntimeFailure {
    using RuntimeFailure::RuntimeFailure;
};

} // namespace ficaug
