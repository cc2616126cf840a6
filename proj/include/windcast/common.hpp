#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace windcast {

inline constexpr std::string_view kVersion = "0.1.0";

// Error taxonomy. The CLI maps these onto process exit codes
// (config -> 2, data -> 3, missing artifact -> 4, integrity -> 5).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad farm/bias/model/train settings.
struct ConfigError : Error {
    using Error::Error;
};

// Invalid call arguments (negative wind speed, shape mismatch, ...).
struct InputError : Error {
    using Error::Error;
};

// Problems with input data: schema violations, excess malformed rows,
// series that cannot be matched or split.
struct DataError : Error {
    using Error::Error;
};

// A referenced artifact (model, normalizer, prepared dir) does not exist.
struct MissingArtifactError : Error {
    using Error::Error;
};

// Artifacts that exist but do not belong together (normalizer hash mismatch,
// truncated parameter blob, report shapes that disagree).
struct IntegrityError : Error {
    using Error::Error;
};

// Training failed (non-finite loss, all search trials diverged).
struct TrainingError : Error {
    using Error::Error;
};

// FNV-1a, 64-bit. Used for manifest/artifact fingerprints, not security.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    return fnv1a64(s.data(), s.size());
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

// Bit-exact double <-> text. Thresholds and leaf values are persisted as
// hex-float strings so a serialize/parse round trip cannot move a split.
inline std::string double_to_hex(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return std::string(buf);
}

inline double hex_to_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw InputError("not a parseable float: '" + s + "'");
    return v;
}

}  // namespace windcast
