#pragma once

#include <stdexcept>
#include <string>

namespace qfreud {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// A division guard tripped during a recurrence step: either a genuine
/// singularity of the mapping or precision exhaustion. `index` is the step,
/// `factor` names the quantity that vanished.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, long index, std::string factor)
        : Error(what), index(index), factor(std::move(factor)) {}
    long index;
    std::string factor;
};

/// Working precision exhausted (e.g. a squared recurrence coefficient came
/// out non-positive, or an internal cross-check failed).
class PrecisionError : public Error {
public:
    PrecisionError(const std::string& what, long index)
        : Error(what), index(index) {}
    long index;
};

/// A series whose terms fail to decay (possible only in exploratory c > 0
/// mode).
class SeriesDivergenceError : public Error {
public:
    explicit SeriesDivergenceError(const std::string& what) : Error(what) {}
};

}  // namespace qfreud
