#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace linkern {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf, res.ptr};
}

}  // namespace linkern
