#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trex {

/// Error carried through the whole pipeline. `stage` labels the pipeline
/// phase that failed (csv / define / parse / booleanize / match), `kind`
/// drives the CLI exit code.
class error : public std::runtime_error {
public:
    enum class kind { usage, parse, data, internal };

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    error(kind k, std::string stage, const std::string& message,
          std::size_t position = npos, std::size_t line = npos)
        : std::runtime_error(stage + ": " + message),
          kind_(k),
          stage_(std::move(stage)),
          position_(position),
          line_(line) {}

    kind error_kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }

    /// Byte offset into the query text, or npos when not applicable.
    std::size_t position() const noexcept { return position_; }
    /// 1-based line number of the offending CSV record, or npos.
    std::size_t line() const noexcept { return line_; }

private:
    kind kind_;
    std::string stage_;
    std::size_t position_;
    std::size_t line_;
};

[[noreturn]] inline void throw_parse(const std::string& msg, std::size_t pos) {
    throw error(error::kind::parse, "parse",
                msg + " (at position " + std::to_string(pos + 1) + ")", pos);
}

[[noreturn]] inline void throw_csv(const std::string& msg, std::size_t line) {
    throw error(error::kind::data, "csv",
                msg + " (line " + std::to_string(line) + ")", error::npos, line);
}

[[noreturn]] inline void throw_data(const std::string& stage, const std::string& msg) {
    throw error(error::kind::data, stage, msg);
}

[[noreturn]] inline void throw_usage(const std::string& msg) {
    throw error(error::kind::usage, "usage", msg);
}

[[noreturn]] inline void throw_internal(const std::string& msg) {
    throw error(error::kind::internal, "internal", msg);
}

} // namespace trex
