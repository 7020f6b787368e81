#ifndef IMGAUTH_ERROR_HPP
#define IMGAUTH_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imgauth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A byte stream could not be decoded (PGM, model file, manifest).
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit DecodeError(const std::string& what) : Error(what), offset_(0) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A rectangle or index fell outside an image.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// An affine map with zero determinant was supplied.
class NonInvertibleError : public Error {
public:
    using Error::Error;
};

}  // namespace imgauth

#endif  // IMGAUTH_ERROR_HPP
