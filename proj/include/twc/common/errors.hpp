#pragma once

#include <stdexcept>
#include <string>

namespace twc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DuplicateTransaction : public Error {
public:
    using Error::Error;
};

class InvalidReorg : public Error {
public:
    using Error::Error;
};

class InvalidRange : public Error {
public:
    using Error::Error;
};

} // namespace twc
