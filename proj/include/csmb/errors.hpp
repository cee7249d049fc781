#ifndef CSMB_ERRORS_HPP
#define CSMB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csmb {

struct DegenerateCouplings : std::runtime_error {
    explicit DegenerateCouplings(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceExceeded : std::runtime_error {
    explicit ResourceExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownElement : std::runtime_error {
    explicit UnknownElement(const std::string& what) : std::runtime_error(what) {}
};

struct BasisDegenerate : std::runtime_error {
    explicit BasisDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSystems : std::runtime_error {
    explicit InsufficientSystems(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientPoints : std::runtime_error {
    explicit InsufficientPoints(const std::string& what) : std::runtime_error(what) {}
};

} // namespace csmb

#endif
