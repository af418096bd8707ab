#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spindyn/analysis.hpp"
#include "spindyn/chaos.hpp"
#include "spindyn/trace.hpp"

namespace spindyn {

// %.17g formatting: lossless and byte-stable across runs
std::string fmt_double(double v);

std::uint64_t fnv1a64(const std::string& data);
std::uint64_t fnv1a64_file(const std::filesystem::path& p);
std::string hex64(std::uint64_t v);

// columns t,sx,sy,sz for quantum traces; t,ex,ey,ez for classical ones
void write_trace_csv(const std::filesystem::path& p, const FidTrace& trace);
FidTrace read_trace_csv(const std::filesystem::path& p);

void write_spectrum_csv(const std::filesystem::path& p, const Spectrum& spec);
void write_eigs_csv(const std::filesystem::path& p, const Eigen::VectorXd& energies);
void write_lyapunov_csv(const std::filesystem::path& p, const LyapunovSeries& series);

}  // namespace spindyn
