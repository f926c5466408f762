#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mprad {

enum class Errc {
    invalid_argument,
    io,
    parse,
    dimension_mismatch,
    unsupported_format,
    out_of_range,
    empty_region,
    no_valid_pairs,
    not_normalized,
    degenerate,
    disconnected_graph,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::io: return "io";
        case Errc::parse: return "parse";
        case Errc::dimension_mismatch: return "dimension_mismatch";
        case Errc::unsupported_format: return "unsupported_format";
        case Errc::out_of_range: return "out_of_range";
        case Errc::empty_region: return "empty_region";
        case Errc::no_valid_pairs: return "no_valid_pairs";
        case Errc::not_normalized: return "not_normalized";
        case Errc::degenerate: return "degenerate";
        case Errc::disconnected_graph: return "disconnected_graph";
    }
    return "unknown";
}

// Every failure raised by the library carries a stable code so the CLI can
// print a single machine-parsable line.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mprad
