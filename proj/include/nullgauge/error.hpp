#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nullgauge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input shapes, invalid parameters, violated preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Raised when a stepper produces a non-finite value or a reconstruction breaks down.
class Breakdown : public Error {
public:
    Breakdown(const std::string& what, double t) : Error(what), time_(t) {}
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

private:
    double time_;
};

class NonFinite : public Breakdown {
public:
    using Breakdown::Breakdown;
};

class NodeError : public Breakdown {
public:
    NodeError(const std::string& what, std::vector<std::size_t> sites, double t)
        : Breakdown(what, t), sites_(std::move(sites)) {}
    const std::vector<std::size_t>& sites() const { return sites_; }

private:
    std::vector<std::size_t> sites_;
};

class WindingError : public Breakdown {
public:
    WindingError(const std::string& what, int winding, double t)
        : Breakdown(what, t), winding_(winding) {}
    int winding() const { return winding_; }

private:
    int winding_;
};

class VanishingB0 : public Breakdown {
public:
    VanishingB0(const std::string& what, std::size_t site, double value, double t)
        : Breakdown(what, t), site_(site), value_(value) {}
    std::size_t site() const { return site_; }
    double value() const { return value_; }

private:
    std::size_t site_;
    double value_;
};

class NegativeRadicand : public Breakdown {
public:
    NegativeRadicand(const std::string& what, std::size_t site, double value, double t)
        : Breakdown(what, t), site_(site), value_(value) {}
    std::size_t site() const { return site_; }
    double value() const { return value_; }

private:
    std::size_t site_;
    double value_;
};

// phi reconstructed as zero at some site of a non-vacuum slice; the B0 closure divides by phi.
class VanishingPhi : public Breakdown {
public:
    VanishingPhi(const std::string& what, std::size_t site, double t)
        : Breakdown(what, t), site_(site) {}
    std::size_t site() const { return site_; }

private:
    std::size_t site_;
};

class VanishingB0AtPoint : public Breakdown {
public:
    VanishingB0AtPoint(const std::string& what, double x, double t)
        : Breakdown(what, t), x_(x) {}
    double x() const { return x_; }

private:
    double x_;
};

class DegenerateSpinor : public Error {
public:
    using Error::Error;
};

class AxialCurrentNonzero : public Error {
public:
    using Error::Error;
};

class DegeneratePhase : public Error {
public:
    using Error::Error;
};

}  // namespace nullgauge
