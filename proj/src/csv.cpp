#include "lisbeam/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

namespace lisbeam {

namespace {

void put(std::ostream& os, double x)
{
    if (std::isnan(x))
        os << "nan";
    else
        os << x;
}

} // namespace

std::string format_csv(const SweepResult& result)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(15);
    os << kCsvHeader << '\n';
    for (const SweepRow& r : result.rows) {
        put(os, r.sweep_value);
        os << ',' << to_string(r.method) << ',' << to_string(r.precoding) << ',';
        put(os, r.mean_se);
        os << ',';
        put(os, r.std_se);
        os << ',';
        put(os, r.mean_cond);
        os << ',';
        put(os, r.mean_offdiag);
        os << ',';
        put(os, r.mean_iters);
        os << ',' << r.errors << ',';
        put(os, r.wall_ms);
        os << '\n';
    }
    return os.str();
}

void emit_csv(const SweepResult& result, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw WriteError("cannot open '" + path + "' for writing");
    out << format_csv(result);
    out.flush();
    if (!out)
        throw WriteError("failed writing '" + path + "'");
}

namespace {

double field_double(const std::string& s, int line)
{
    if (s == "nan")
        return std::nan("");
    double x = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw ParseError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return x;
}

} // namespace

SweepResult parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ParseError("csv: missing or unexpected header");
    SweepResult result;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::istringstream fields(line);
        std::string item;
        while (std::getline(fields, item, ','))
            f.push_back(item);
        if (f.size() != 10)
            throw ParseError("csv line " + std::to_string(line_no) + ": expected 10 fields");
        SweepRow r;
        r.sweep_value = field_double(f[0], line_no);
        try {
            r.method = parse_method(f[1]);
        } catch (const std::invalid_argument& e) {
            throw ParseError("csv line " + std::to_string(line_no) + ": " + e.what());
        }
        if (f[2] == "digital")
            r.precoding = PrecodingMode::digital;
        else if (f[2] == "hybrid")
            r.precoding = PrecodingMode::hybrid;
        else
            throw ParseError("csv line " + std::to_string(line_no) + ": bad precoding '" + f[2] + "'");
        r.mean_se = field_double(f[3], line_no);
        r.std_se = field_double(f[4], line_no);
        r.mean_cond = field_double(f[5], line_no);
        r.mean_offdiag = field_double(f[6], line_no);
        r.mean_iters = field_double(f[7], line_no);
        r.errors = static_cast<int>(field_double(f[8], line_no));
        r.wall_ms = field_double(f[9], line_no);
        result.rows.push_back(r);
    }
    return result;
}

} // namespace lisbeam
