#ifndef RFFHSI_ERROR_HPP
#define RFFHSI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rffhsi {

// Error categories the CLI maps to one-line machine-parsable messages.
enum class ErrorCategory { io, format, dimension, numeric, usage };

inline const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::io: return "io";
        case ErrorCategory::format: return "format";
        case ErrorCategory::dimension: return "dimension";
        case ErrorCategory::numeric: return "numeric";
        case ErrorCategory::usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorCategory::io, msg); }
[[noreturn]] inline void throw_format(const std::string& msg) { throw Error(ErrorCategory::format, msg); }
[[noreturn]] inline void throw_dimension(const std::string& msg) { throw Error(ErrorCategory::dimension, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorCategory::numeric, msg); }
[[noreturn]] inline void throw_usage(const std::string& msg) { throw Error(ErrorCategory::usage, msg); }

}  // namespace rffhsi

#endif
