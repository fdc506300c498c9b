#pragma once

#include <string>

#include "lisbeam/sweep.hpp"

namespace lisbeam {

class WriteError : public Error {
public:
    using Error::Error;
};

inline constexpr const char* kCsvHeader =
    "sweep_value,method,precoding,mean_se,std_se,mean_cond,mean_offdiag,mean_iters,errors,wall_ms";

// Header plus one line per row, 15 significant digits.
std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);

// Inverse of format_csv. Throws ParseError on a malformed document.
SweepResult parse_csv(const std::string& text);

} // namespace lisbeam
