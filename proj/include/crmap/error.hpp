#ifndef CRMAP_ERROR_HPP
#define CRMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace crmap
{

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct varspec_mismatch : error {
    using error::error;
};

struct non_unit_error : error {
    using error::error;
};

struct field_error : error {
    using error::error;
};

struct parse_error : error {
    parse_error(const std::string &msg, int line, int column)
        : error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line(line), column(column)
    {
    }
    int line;
    int column;
};

struct model_error : error {
    using error::error;
};

struct singular_point : error {
    using error::error;
};

struct not_transversal : error {
    using error::error;
};

struct residual_nonzero : error {
    using error::error;
};

struct division_inconsistency : error {
    using error::error;
};

struct inconsistent_invariants : error {
    using error::error;
};

} // namespace crmap

#endif
