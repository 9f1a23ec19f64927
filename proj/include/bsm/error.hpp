#ifndef BSM_ERROR_HPP
#define BSM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bsm {

enum class errc {
    ok = 0,
    invalid_argument,
    index_out_of_range,
    dimension_mismatch,
    length_mismatch,
    stream_truncated,
    storage_exceeded,
    too_large_to_enumerate,
    format_error,
    io_error,
    unknown_selector,
    identical_messages,
    empty_preimage,
};

const char* errc_name(errc c);

/// Exception carrying a stable error code, mapped 1:1 onto the C API status codes.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace bsm

#endif
