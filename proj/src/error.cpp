// error.cpp — Error kind names

#include "giant/error.hpp"

namespace giant {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::integration: return "integration";
    case ErrorKind::io: return "io";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::undefined: return "undefined";
    }
    return "unknown";
}

} // namespace giant
