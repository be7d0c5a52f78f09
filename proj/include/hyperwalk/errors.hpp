#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperwalk {

// Bad arguments or violated preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyGraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DisconnectedPair : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SameVertex : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SizeCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyHalfTile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyCut : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A random-walk realization ran past its step cap. Carries the statistics
// of the realizations that finished.
class StepCapExceeded : public std::runtime_error {
public:
    StepCapExceeded(const std::string& what, std::size_t completed, std::size_t failed, double partial_mean,
                    double partial_stderr)
        : std::runtime_error(what), completed(completed), failed(failed), partial_mean(partial_mean),
          partial_stderr(partial_stderr) {}

    std::size_t completed;
    std::size_t failed;
    double partial_mean;
    double partial_stderr;
};

// Raised when a flow would be placed on a vertex pair that is not an edge.
// Indicates a broken geometric guarantee, never a user error.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace hyperwalk
