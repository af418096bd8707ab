#include "spindyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spindyn/errors.hpp"

namespace spindyn {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw config_error("cannot open file for hashing: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw config_error("cannot write file: " + p.string());
    return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& p, const FidTrace& trace) {
    auto out = open_out(p);
    out << (trace.source == "classical" ? "t,ex,ey,ez\n" : "t,sx,sy,sz\n");
    for (std::size_t i = 0; i < trace.t.size(); ++i)
        out << fmt_double(trace.t[i]) << ',' << fmt_double(trace.sx[i]) << ','
            << fmt_double(trace.sy[i]) << ',' << fmt_double(trace.sz[i]) << '\n';
}

FidTrace read_trace_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw config_error("cannot read trace: " + p.string());
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty trace file: " + p.string());
    FidTrace tr;
    tr.source = line.find("ex") != std::string::npos ? "classical" : "quantum";
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[4];
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
            throw config_error(p.string() + ":" + std::to_string(lineno) + ": bad CSV row");
        tr.t.push_back(v[0]);
        tr.sx.push_back(v[1]);
        tr.sy.push_back(v[2]);
        tr.sz.push_back(v[3]);
    }
    if (tr.t.empty()) throw config_error("trace has no samples: " + p.string());
    return tr;
}

void write_spectrum_csv(const std::filesystem::path& p, const Spectrum& spec) {
    auto out = open_out(p);
    out << "omega,re,im,abs\n";
    for (std::size_t k = 0; k < spec.omega.size(); ++k)
        out << fmt_double(spec.omega[k]) << ',' << fmt_double(spec.x[k].real()) << ','
            << fmt_double(spec.x[k].imag()) << ',' << fmt_double(std::abs(spec.x[k])) << '\n';
}

void write_eigs_csv(const std::filesystem::path& p, const Eigen::VectorXd& energies) {
    auto out = open_out(p);
    out << "index,energy\n";
    for (Eigen::Index i = 0; i < energies.size(); ++i)
        out << i << ',' << fmt_double(energies(i)) << '\n';
}

void write_lyapunov_csv(const std::filesystem::path& p, const LyapunovSeries& series) {
    auto out = open_out(p);
    out << "t,L\n";
    for (std::size_t i = 0; i < series.t.size(); ++i)
        out << fmt_double(series.t[i]) << ',' << fmt_double(series.L[i]) << '\n';
}

}  // namespace spindyn
