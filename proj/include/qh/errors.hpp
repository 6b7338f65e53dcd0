#pragma once

#include <stdexcept>
#include <string>

namespace qh {

/// Base class for all toolkit failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitian : public Error {
public:
    explicit NotHermitian(const std::string& what) : Error(what) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

class Overflow : public Error {
public:
    explicit Overflow(const std::string& what) : Error(what) {}
};

class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& what) : Error(what) {}
};

class SingularEta : public Error {
public:
    explicit SingularEta(const std::string& what) : Error(what) {}
};

class SingularityOnGrid : public Error {
public:
    explicit SingularityOnGrid(const std::string& what) : Error(what) {}
};

class SingularityTooClose : public Error {
public:
    explicit SingularityTooClose(const std::string& what) : Error(what) {}
};

class PositivityLost : public Error {
public:
    PositivityLost(const std::string& what, double t) : Error(what), time(t) {}
    double time;
};

class Blowup : public Error {
public:
    Blowup(const std::string& what, double t) : Error(what), time(t) {}
    double time;
};

class GridTooShort : public Error {
public:
    explicit GridTooShort(const std::string& what) : Error(what) {}
};

class QuadratureTooCoarse : public Error {
public:
    explicit QuadratureTooCoarse(const std::string& what) : Error(what) {}
};

class TruncationTooSmall : public Error {
public:
    explicit TruncationTooSmall(const std::string& what) : Error(what) {}
};

class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

} // namespace qh
