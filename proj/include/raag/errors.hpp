#pragma once

#include <stdexcept>
#include <string>

namespace raag {

// Misuse of the API: mixed group models, invalid parameters, empty inputs.
struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed external input: group files, word strings, cache records.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource limit was hit. Carries the largest radius (or other
// unit of progress) that completed before the limit.
struct resource_error : std::runtime_error {
    int completed_radius;
    resource_error(const std::string& what, int completed)
        : std::runtime_error(what), completed_radius(completed) {}
};

}  // namespace raag
