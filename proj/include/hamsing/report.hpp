#pragma once

// Machine-readable report and plot-data emission: JSON for events and command
// reports, CSV for traces. Formatting is fixed (shortest round-trip doubles,
// %.17g in CSV) so identical inputs yield byte-identical files.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamsing/flow.hpp"

namespace hamsing {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class C>
nlohmann::json complex_json(const C& v) {
  return nlohmann::json::array({real_d(v), imag_d(v)});
}

/// Trace CSV per the external interface: s, re_z, im_z, re_y1, im_y1, re_y2,
/// im_y2 and, when W values are supplied, re_W, im_W.
template <class C>
std::string trace_csv(const ContinuationTrace<C>& trace,
                      const std::vector<C>* ws = nullptr) {
  std::string out = "s,re_z,im_z,re_y1,im_y1,re_y2,im_y2";
  if (ws) out += ",re_W,im_W";
  out += "\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& p = trace.samples[i];
    out += fmt17(p.s) + "," + fmt17(real_d(p.z)) + "," + fmt17(imag_d(p.z)) + "," +
           fmt17(real_d(p.y1)) + "," + fmt17(imag_d(p.y1)) + "," +
           fmt17(real_d(p.y2)) + "," + fmt17(imag_d(p.y2));
    if (ws)
      out += "," + fmt17(real_d((*ws)[i])) + "," + fmt17(imag_d((*ws)[i]));
    out += "\n";
  }
  return out;
}

template <class C>
nlohmann::json event_json(const SingularityEvent<C>& ev) {
  nlohmann::json j;
  j["z_inf"] = complex_json(ev.z_inf);
  j["branch_class"] = ev.branch_class;
  j["sheets"] = ev.sheets;
  j["sheets_expected"] = ev.sheets_expected;
  j["leading"] = {{"value", complex_json(ev.leading)},
                  {"meaning", "c1^(rho/d)"},
                  {"exponent1", ev.exponent1},
                  {"exponent2", ev.exponent2}};
  j["fit_residual"] = ev.fit_residual;
  j["chart_defect"] = ev.chart_defect;
  j["closure_defects"] = ev.closure_defects;
  return j;
}

/// One CSV row per deduplicated singularity (header-only when none found).
template <class C>
std::string events_csv(const std::vector<SingularityEvent<C>>& events) {
  std::string out =
      "re_z_inf,im_z_inf,branch_class,sheets,re_leading,im_leading,"
      "exponent1,exponent2,fit_residual,chart_defect\n";
  for (const auto& ev : events)
    out += fmt17(real_d(ev.z_inf)) + "," + fmt17(imag_d(ev.z_inf)) + "," +
           std::to_string(ev.branch_class) + "," + std::to_string(ev.sheets) + "," +
           fmt17(real_d(ev.leading)) + "," + fmt17(imag_d(ev.leading)) + "," +
           fmt17(ev.exponent1) + "," + fmt17(ev.exponent2) + "," +
           fmt17(ev.fit_residual) + "," + fmt17(ev.chart_defect) + "\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << text;
}

}  // namespace hamsing
