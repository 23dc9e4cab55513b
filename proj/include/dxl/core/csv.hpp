#pragma once
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dxl/core/errors.hpp"
#include "dxl/core/trace.hpp"

namespace dxl {

// %.17g round-trips doubles and keeps output byte-stable across runs.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Write-then-rename: an interrupted writer never leaves a half-written file
// under the final name.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericalError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw NumericalError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string trace_to_csv(const CorrelatorTrace& tr) {
    std::ostringstream os;
    os << "time_in_inv_J,mean,stderr\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        double se = tr.stderr_.empty() ? 0.0 : tr.stderr_[k];
        os << fmt_g17(tr.time[k]) << ',' << fmt_g17(tr.value[k]) << ',' << fmt_g17(se) << '\n';
    }
    return os.str();
}

inline void write_trace_csv(const std::filesystem::path& path, const CorrelatorTrace& tr) {
    write_file_atomic(path, trace_to_csv(tr));
}

inline CorrelatorTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    CorrelatorTrace tr;
    std::string line;
    if (!std::getline(in, line) || line.rfind("time_in_inv_J,mean,stderr", 0) != 0)
        throw InputError(path.string() + ": expected header time_in_inv_J,mean,stderr");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw InputError(path.string() + ": malformed row: " + line);
        tr.time.push_back(std::stod(a));
        tr.value.push_back(std::stod(b));
        tr.stderr_.push_back(std::stod(c));
    }
    tr.validate();
    return tr;
}

// FNV-1a 64 over file bytes; recorded in run manifests.
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) { h ^= c; h *= 0x100000001b3ull; }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace dxl
