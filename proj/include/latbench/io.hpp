#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "latbench/fading.hpp"
#include "latbench/sim.hpp"
#include "latbench/slb.hpp"

namespace latbench::io {

/// %.17g formatting: round-trip exact for doubles.
std::string format_g17(double x);

/// header: z,pdf
std::string zeta_csv(const fading::ZetaDensity& density);

/// header: rho_db,p_slb,std_err,n_frames,n_errors
std::string slb_csv(std::span<const slb::CurvePoint> points);

/// slb_csv with appended mc_p_slb,mc_std_err columns (Monte Carlo cross-check)
std::string slb_csv_with_mc(std::span<const slb::CurvePoint> quad,
                            std::span<const slb::CurvePoint> mc);

/// header: rho_db,fer,std_err,n_frames,n_frame_errors,n_erasures,mean_nodes
std::string fer_csv(std::span<const sim::FerPoint> points);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Sibling gnuplot script so curves render without the toolkit.
std::string gnuplot_probability_script(const std::string& csv_filename,
                                       const std::string& title,
                                       const std::string& y_label);
std::string gnuplot_density_script(const std::string& csv_filename,
                                   const std::string& title);

}  // namespace latbench::io
