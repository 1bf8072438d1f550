#include "latbench/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "latbench/errors.hpp"

namespace latbench::io {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string zeta_csv(const fading::ZetaDensity& density) {
  std::ostringstream os;
  os << "z,pdf\n";
  for (int k = 0; k < density.size(); ++k) {
    os << format_g17(density.z_at(k)) << ','
       << format_g17(density.values()[static_cast<std::size_t>(k)]) << '\n';
  }
  return os.str();
}

std::string slb_csv(std::span<const slb::CurvePoint> points) {
  std::ostringstream os;
  os << "rho_db,p_slb,std_err,n_frames,n_errors\n";
  for (const auto& p : points) {
    os << format_g17(p.rho_db) << ',' << format_g17(p.value) << ','
       << format_g17(p.std_err) << ',' << p.n_frames << ',' << p.n_errors << '\n';
  }
  return os.str();
}

std::string slb_csv_with_mc(std::span<const slb::CurvePoint> quad,
                            std::span<const slb::CurvePoint> mc) {
  if (quad.size() != mc.size()) {
    throw config_error("slb_csv_with_mc: curve sizes differ");
  }
  std::ostringstream os;
  os << "rho_db,p_slb,std_err,n_frames,n_errors,mc_p_slb,mc_std_err\n";
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto& p = quad[i];
    os << format_g17(p.rho_db) << ',' << format_g17(p.value) << ','
       << format_g17(p.std_err) << ',' << p.n_frames << ',' << p.n_errors << ','
       << format_g17(mc[i].value) << ',' << format_g17(mc[i].std_err) << '\n';
  }
  return os.str();
}

std::string fer_csv(std::span<const sim::FerPoint> points) {
  std::ostringstream os;
  os << "rho_db,fer,std_err,n_frames,n_frame_errors,n_erasures,mean_nodes\n";
  for (const auto& p : points) {
    os << format_g17(p.rho_db) << ',' << format_g17(p.fer) << ','
       << format_g17(p.std_err) << ',' << p.n_frames << ',' << p.n_frame_errors
       << ',' << p.n_erasures << ',' << format_g17(p.mean_nodes) << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw config_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string gnuplot_probability_script(const std::string& csv_filename,
                                       const std::string& title,
                                       const std::string& y_label) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set logscale y\n"
     << "set format y '1e%T'\n"
     << "set xlabel 'SNR rho [dB]'\n"
     << "set ylabel '" << y_label << "'\n"
     << "set grid\n"
     << "set key bottom left\n"
     << "set title '" << title << "'\n"
     << "plot '" << csv_filename
     << "' skip 1 using 1:2 with linespoints pt 7 ps 0.5 title '" << y_label
     << "'\n"
     << "pause -1 'press enter to close'\n";
  return os.str();
}

std::string gnuplot_density_script(const std::string& csv_filename,
                                   const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set xlabel 'z'\n"
     << "set ylabel 'pdf'\n"
     << "set grid\n"
     << "set title '" << title << "'\n"
     << "plot '" << csv_filename << "' skip 1 using 1:2 with lines title 'p_zeta'\n"
     << "pause -1 'press enter to close'\n";
  return os.str();
}

}  // namespace latbench::io
