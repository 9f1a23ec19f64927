#include "bsm/params.hpp"

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsm/error.hpp"

namespace bsm {

const char* errc_name(errc c) {
    switch (c) {
        case errc::ok: return "ok";
        case errc::invalid_argument: return "invalid_argument";
        case errc::index_out_of_range: return "index_out_of_range";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::length_mismatch: return "length_mismatch";
        case errc::stream_truncated: return "stream_truncated";
        case errc::storage_exceeded: return "storage_exceeded";
        case errc::too_large_to_enumerate: return "too_large_to_enumerate";
        case errc::format_error: return "format_error";
        case errc::io_error: return "io_error";
        case errc::unknown_selector: return "unknown_selector";
        case errc::identical_messages: return "identical_messages";
        case errc::empty_preimage: return "empty_preimage";
    }
    return "unknown";
}

Params Params::create(uint64_t n, uint32_t k, uint64_t m, uint64_t gamma_num, uint64_t gamma_den) {
    if (n == 0) fail(errc::invalid_argument, "n must be positive");
    if (k == 0) fail(errc::invalid_argument, "k must be positive");
    if (m == 0) fail(errc::invalid_argument, "m must be positive");
    if (m > n) fail(errc::invalid_argument, "m must not exceed n");
    if (gamma_den == 0 || gamma_num == 0 || gamma_num >= gamma_den)
        fail(errc::invalid_argument, "gamma must be a rational in (0,1)");

    using boost::multiprecision::cpp_int;
    cpp_int total = cpp_int(n) * k;
    if (total > std::numeric_limits<uint64_t>::max())
        fail(errc::invalid_argument, "k*n exceeds the representable string length");
    cpp_int beta_big = (cpp_int(gamma_num) * n * k) / gamma_den;
    uint64_t beta = static_cast<uint64_t>(beta_big);

    return Params(n, k, m, gamma_num, gamma_den, beta);
}

double Params::log2_key_count() const { return double(k_) * std::log2(double(n_)); }

uint64_t Params::key_count() const {
    uint64_t result = 1;
    for (uint32_t j = 0; j < k_; ++j) {
        if (n_ != 0 && result > std::numeric_limits<uint64_t>::max() / n_)
            fail(errc::too_large_to_enumerate, "n^k does not fit in 64 bits");
        result *= n_;
    }
    return result;
}

bool Params::keys_enumerable(uint64_t max_keys) const {
    uint64_t result = 1;
    for (uint32_t j = 0; j < k_; ++j) {
        if (result > max_keys / n_) return false;
        result *= n_;
    }
    return result <= max_keys;
}

} // namespace bsm
