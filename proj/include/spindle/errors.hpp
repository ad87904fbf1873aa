#ifndef SPINDLE_ERRORS_HPP
#define SPINDLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spindle {

// Base class for all geometry/config failures raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateChord : Error {
    using Error::Error;
};
struct ChordTooLong : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct InvalidPolygon : Error {
    using Error::Error;
};
struct EmptyInput : Error {
    using Error::Error;
};
struct SamplerStall : Error {
    using Error::Error;
};
struct QuadratureFailure : Error {
    using Error::Error;
};
struct VertexOutsideModel : Error {
    using Error::Error;
};
struct HeightOutOfRange : Error {
    using Error::Error;
};
struct IntersectionNotFound : Error {
    using Error::Error;
};
struct PointsOutsideModel : Error {
    using Error::Error;
};
struct DegenerateTriangle : Error {
    using Error::Error;
};
struct RadiusNotAdmissible : Error {
    using Error::Error;
};
struct NonpositiveValue : Error {
    using Error::Error;
};
struct InsufficientReplications : Error {
    using Error::Error;
};
struct InsufficientPoints : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace spindle

#endif  // SPINDLE_ERRORS_HPP
