#include "core/csvio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/numeric.hpp"

namespace lbex {

uint64_t fnv1a64(std::string_view data) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open for checksum: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64(buf.str());
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot write: " + tmp);
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::Io, "write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        fail(ErrorKind::Io, "cannot move " + tmp + " into place");
    }
}

std::string orbit_csv(const PseudoOrbit& orbit) {
    std::ostringstream os;
    os << "n,value\n";
    for (size_t n = 0; n < orbit.values.size(); ++n) {
        os << n << "," << format_double(orbit.values[n]) << "\n";
    }
    return os.str();
}

std::vector<std::pair<long, double>> parse_orbit_csv(const std::string& text) {
    std::vector<std::pair<long, double>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line.rfind("n,", 0) == 0) continue;  // header
        }
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorKind::Syntax, "bad orbit CSV row: " + line);
        try {
            rows.emplace_back(std::stol(line.substr(0, comma)),
                              parse_double(line.substr(comma + 1)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(ErrorKind::Syntax, "bad orbit CSV row: " + line);
        }
    }
    return rows;
}

namespace {

std::string format_maybe_inf(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return format_double(x);
}

}  // namespace

std::string lbe_csv(const LbeSeries& lbe, const PrecisionSeries& precision) {
    std::ostringstream os;
    os << "n,lbe,log2_lbe,epsilon,guard\n";
    const size_t n = std::min(lbe.values.size(), precision.values.size());
    for (size_t i = 0; i < n; ++i) {
        const double v = lbe.values[i];
        os << i << "," << format_double(v) << ","
           << (v > 0.0 ? format_double(std::log2(v)) : "-inf") << ","
           << format_maybe_inf(precision.values[i]) << ","
           << static_cast<int>(precision.guard[i]) << "\n";
    }
    return os.str();
}

std::string verify_csv(const ReferenceOrbit& reference, const PseudoOrbit& a, const PseudoOrbit& b,
                       const VerificationReport& report) {
    std::ostringstream os;
    os << "n,ref,a,b,lbe,margin\n";
    for (long i = 0; i < report.window; ++i) {
        const size_t n = static_cast<size_t>(i);
        os << i << "," << format_double(reference.value_as_double(n)) << ","
           << format_double(a.values[n]) << "," << format_double(b.values[n]) << ","
           << format_double(std::fabs(a.values[n] - b.values[n]) / 2.0) << ","
           << format_double(report.margins[n]) << "\n";
    }
    return os.str();
}

}  // namespace lbex
