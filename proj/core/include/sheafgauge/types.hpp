#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sheafgauge {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Malformed input data (graphs, features, serialized sheaves). */
class InputError : public Error {
public:
    using Error::Error;
};

/** A structural or numerical validation check failed. */
class ValidationError : public Error {
public:
    using Error::Error;
};

/** A requested pair of cells is not an incidence of the complex. */
class IncidenceError : public Error {
public:
    using Error::Error;
};

/** Matrix or stalk dimensions do not agree. */
class DimensionError : public Error {
public:
    using Error::Error;
};

/** A parameter lies outside its admissible range. */
class ConfigError : public Error {
public:
    using Error::Error;
};

/** An operator violates a numerical precondition (symmetry, PSD). */
class NumericalError : public Error {
public:
    using Error::Error;
};

/** Operation called with a grounding in the wrong mode. */
class ModeError : public Error {
public:
    using Error::Error;
};

/** Serialized payload carries an unsupported schema version. */
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace sheafgauge
