#pragma once

#include <stdexcept>
#include <string>

namespace cbx {

// Error categories map 1:1 onto CLI exit codes (see tools/).
enum class errc {
    invalid_argument,    // bad inputs, parse failures        -> exit 1
    unsupported_family,  // base family not handled           -> exit 1
    out_of_range,        // target not representable          -> exit 2
    precondition,        // hypothesis of a construction fails-> exit 2
    budget_exhausted,    // search/enumeration budget hit     -> exit 3
    construction_failed, // construction ran but could not finish -> exit 3
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace cbx
