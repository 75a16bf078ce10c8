#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace harmonorm {

/// Base of every error raised by the library. Carries an optional
/// evaluation point so callers (the norm engine, the CLI) can report where
/// a functional broke down.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}

    virtual const char* kind() const noexcept { return "Error"; }

    const std::optional<std::complex<double>>& point() const noexcept { return point_; }
    void set_point(std::complex<double> z) { point_ = z; }

private:
    std::optional<std::complex<double>> point_;
};

#define HARMONORM_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                       \
    public:                                                           \
        using Error::Error;                                           \
        const char* kind() const noexcept override { return #Name; }  \
    };

// |z| >= 1 handed to an evaluator.
HARMONORM_DEFINE_ERROR(DomainError)
// A denominator (or h') vanished within tolerance.
HARMONORM_DEFINE_ERROR(SingularityError)
// Invalid construction parameters (e.g. Mobius with |a| >= 1).
HARMONORM_DEFINE_ERROR(ConstructionError)
// |omega(z)| >= 1 within tolerance.
HARMONORM_DEFINE_ERROR(SenseError)
// CDO operator requested on a map without square-root dilatation.
HARMONORM_DEFINE_ERROR(MissingQError)
HARMONORM_DEFINE_ERROR(DegenerateError)
HARMONORM_DEFINE_ERROR(ParamError)
HARMONORM_DEFINE_ERROR(KeyError)
HARMONORM_DEFINE_ERROR(SeriesError)

#undef HARMONORM_DEFINE_ERROR

} // namespace harmonorm
