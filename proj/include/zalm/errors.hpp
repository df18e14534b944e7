#ifndef ZALM_ERRORS_HPP
#define ZALM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zalm {

// Numerical failure of an otherwise valid request (degenerate fit,
// non-finite amplitudes, ...).  Parameter violations use
// std::invalid_argument instead; the CLI maps the two to different exit
// codes.
struct computation_error : std::runtime_error {
    explicit computation_error(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace zalm

#endif
