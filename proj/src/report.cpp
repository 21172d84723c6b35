#include "keysub/report.hpp"

#include <sstream>
#include <stdexcept>

namespace keysub {

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "table") return OutputFormat::Table;
  throw std::invalid_argument("output format must be json or table, got '" + std::string(text) + "'");
}

nlohmann::ordered_json to_json(const VerdictReport& report) {
  nlohmann::ordered_json j;
  j["property"] = report.property;
  j["subject"] = report.subject;
  j["gamma"] = report.gamma;
  j["verdict"] = to_string(report.verdict);
  j["witnesses"] = report.witnesses;
  if (report.box) {
    j["primes"] = report.box->primes.primes();
    j["exp_cap"] = report.box->exp_cap;
    j["truncation"] = report.box->truncation.get_str();
  } else {
    j["primes"] = nullptr;
    j["exp_cap"] = nullptr;
    j["truncation"] = nullptr;
  }
  j["notes"] = report.notes;
  return j;
}

namespace {

std::string emit_json(const CommandReport& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["config"] = report.config;
  j["verdict"] = to_string(report.verdict);
  j["witnesses"] = report.witnesses;
  if (report.timing_ms)
    j["timing_ms"] = *report.timing_ms;
  else
    j["timing_ms"] = nullptr;
  if (report.details.size() == 1) {
    const auto detail = to_json(report.details.front());
    for (auto& [key, value] : detail.items())
      if (key != "verdict" && key != "witnesses") j[key] = value;
  } else if (!report.details.empty()) {
    j["details"] = nlohmann::ordered_json::array();
    for (const auto& d : report.details) j["details"].push_back(to_json(d));
  }
  if (!report.lines.empty()) j["checks"] = report.lines;
  return j.dump(2) + "\n";
}

void emit_detail(std::ostringstream& out, const VerdictReport& d, const std::string& indent) {
  out << indent << "property:   " << d.property << "\n";
  if (!d.subject.empty()) out << indent << "subject:    " << d.subject << "\n";
  if (!d.gamma.empty()) out << indent << "gamma:      " << d.gamma << "\n";
  out << indent << "verdict:    " << to_string(d.verdict) << "\n";
  if (d.box) out << indent << "box:        " << d.box->to_string() << "\n";
  for (const auto& w : d.witnesses) out << indent << "witness:    " << w << "\n";
  for (const auto& n : d.notes) out << indent << "note:       " << n << "\n";
}

std::string emit_table(const CommandReport& report) {
  std::ostringstream out;
  out << "command:    " << report.command << "\n";
  out << "config:     " << report.config.dump() << "\n";
  out << "verdict:    " << to_string(report.verdict) << "\n";
  for (const auto& w : report.witnesses) out << "witness:    " << w << "\n";
  if (report.timing_ms) out << "timing_ms:  " << *report.timing_ms << "\n";
  for (const auto& line : report.lines) out << "  " << line << "\n";
  for (const auto& d : report.details) {
    out << "--\n";
    emit_detail(out, d, "  ");
  }
  return out.str();
}

}  // namespace

std::string emit_report(const CommandReport& report, OutputFormat format) {
  return format == OutputFormat::Json ? emit_json(report) : emit_table(report);
}

}  // namespace keysub
