#include "rayleigh/serialization.hpp"

#include <json.hpp>

#include <cstdio>

namespace rayleigh {

namespace {

using nlohmann::json;

json terms_to_json(const MonomialList& terms) {
  json out = json::array();
  for (const auto& m : terms) {
    out.push_back(json::array({m.i, m.j, rational_to_string(m.c)}));
  }
  return out;
}

MonomialList terms_from_json(const json& j) {
  MonomialList out;
  for (const auto& t : j) {
    out.push_back({t.at(0).get<int>(), t.at(1).get<int>(),
                   rational_from_string(t.at(2).get<std::string>())});
  }
  return out;
}

json mat_to_json(const Mat2& m) {
  return json::array({json::array({m.m00, m.m01}), json::array({m.m10, m.m11})});
}

json report_to_json(const EquilibriumReport& report) {
  json j;
  j["location"] = json::array({report.location.x, report.location.y});
  j["chart"] = report.chart.has_value() ? to_string(*report.chart) : "finite";
  j["jac"] = mat_to_json(report.jac);
  j["delta"] = report.delta;
  j["gamma"] = report.gamma;
  j["kind"] = to_string(report.kind) +
              (report.kind == EquilibriumKind::Degenerate && !report.provenance.empty()
                   ? " (resolved)"
                   : "");
  if (!report.note.empty()) j["note"] = report.note;
  if (!report.provenance.empty()) {
    json chain = json::array();
    for (const auto& step : report.provenance) {
      json s;
      s["transform"] = to_string(step.transform);
      s["cancelled_power"] = step.cancelled_power;
      json subs = json::array();
      for (const auto& sub : step.sub_equilibria) subs.push_back(report_to_json(sub));
      s["sub_equilibria"] = std::move(subs);
      chain.push_back(std::move(s));
    }
    j["provenance"] = std::move(chain);
  }
  return j;
}

json record_to_json(const LimitCycleRecord& record) {
  json j;
  j["r_star"] = record.r_star;
  j["period"] = record.period;
  j["multiplier"] = record.multiplier;
  j["stability"] = to_string(record.stability);
  j["amp_x"] = record.amp_x;
  j["amp_y"] = record.amp_y;
  j["diagnostics"] = {{"div_exponent", record.div_exponent},
                      {"residual", record.residual},
                      {"multiplier_check_ok", record.multiplier_check_ok},
                      {"measured_backward", record.measured_backward},
                      {"multiplier_method", record.multiplier_method}};
  return j;
}

json hypothesis_to_json(const HypothesisReport& report) {
  json j;
  json conditions = json::array();
  for (const auto& c : report.conditions) {
    conditions.push_back({{"id", c.id}, {"status", to_string(c.status)}, {"witness", c.witness}});
  }
  j["conditions"] = std::move(conditions);
  j["condition2_readings"] = {{"measured_direction", report.condition2.measured_direction},
                              {"satisfied_as_printed", report.condition2.satisfied_as_printed},
                              {"satisfied_as_used", report.condition2.satisfied_as_used},
                              {"verdict_reading", report.condition2.verdict_reading}};
  j["verdict"] = report.verdict_text;
  return j;
}

}  // namespace

std::string to_json_string(const PlanarPolySystem& sys, int indent) {
  json j;
  j["P"] = terms_to_json(sys.P);
  j["Q"] = terms_to_json(sys.Q);
  j["d"] = sys.degree;
  return j.dump(indent);
}

PlanarPolySystem system_from_json(const std::string& text) {
  const json j = json::parse(text);
  PlanarPolySystem sys =
      PlanarPolySystem::make(terms_from_json(j.at("P")), terms_from_json(j.at("Q")));
  if (j.contains("d") && j.at("d").get<int>() != sys.degree) {
    throw std::invalid_argument("system_from_json: stored degree disagrees with the terms");
  }
  return sys;
}

std::string to_json_string(const ChartSystem& cs, int indent) {
  json j;
  j["P"] = terms_to_json(cs.du);
  j["Q"] = terms_to_json(cs.dv);
  j["d"] = cs.source_degree;
  j["chart"] = to_string(cs.chart);
  return j.dump(indent);
}

ChartSystem chart_from_json(const std::string& text) {
  const json j = json::parse(text);
  ChartSystem cs;
  cs.du = canonical(terms_from_json(j.at("P")));
  cs.dv = canonical(terms_from_json(j.at("Q")));
  cs.source_degree = j.at("d").get<int>();
  const std::string chart = j.at("chart").get<std::string>();
  if (chart == "U1") cs.chart = ChartId::U1;
  else if (chart == "U2") cs.chart = ChartId::U2;
  else if (chart == "U3") cs.chart = ChartId::U3;
  else if (chart == "V1") cs.chart = ChartId::V1;
  else if (chart == "V2") cs.chart = ChartId::V2;
  else if (chart == "V3") cs.chart = ChartId::V3;
  else throw std::invalid_argument("chart_from_json: unknown chart '" + chart + "'");
  return cs;
}

std::string to_json_string(const EquilibriumReport& report, int indent) {
  return report_to_json(report).dump(indent);
}

std::string to_json_string(const LimitCycleRecord& record, int indent) {
  return record_to_json(record).dump(indent);
}

std::string to_json_string(const HypothesisReport& report, int indent) {
  return hypothesis_to_json(report).dump(indent);
}

std::string to_json_string(const PortraitModel& model, int indent) {
  json j;
  j["params"] = {{"a", rational_to_string(model.params.a)}, {"n", model.params.n}};
  j["form"] = to_string(model.form);
  j["class"] = to_string(model.class_tag);
  j["orientation_factor"] = model.orientation;
  j["origin"] = report_to_json(model.origin);
  json infinite = json::array();
  for (const auto& report : model.infinite) infinite.push_back(report_to_json(report));
  j["infinite"] = std::move(infinite);
  if (model.cycle.has_value()) {
    j["cycle"] = record_to_json(model.cycle->record);
    j["cycle"]["polyline_points"] = model.cycle->polyline.size();
  }
  json orbits = json::array();
  for (const auto& orbit : model.orbits) {
    orbits.push_back({{"points", orbit.points.size()},
                      {"closed", orbit.closed},
                      {"qualitative", orbit.qualitative}});
  }
  j["orbits"] = std::move(orbits);
  return j.dump(indent);
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t,x,y\n";
  char line[96];
  for (const auto& s : trajectory.states) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", s.t, s.x, s.y);
    out += line;
  }
  return out;
}

std::string sweep_csv_header() {
  return "a,n,r_star,period,multiplier,stability,amp_x,amp_y,residual,status\n";
}

std::string sweep_csv_row(double a, int n, const std::optional<LimitCycleRecord>& record,
                          const std::string& status) {
  char line[256];
  if (record.has_value()) {
    std::snprintf(line, sizeof line, "%.12g,%d,%.12g,%.12g,%.12g,%s,%.12g,%.12g,%.3g,%s\n", a, n,
                  record->r_star, record->period, record->multiplier,
                  to_string(record->stability).c_str(), record->amp_x, record->amp_y,
                  record->residual, status.c_str());
  } else {
    std::snprintf(line, sizeof line, "%.12g,%d,,,,,,,,%s\n", a, n, status.c_str());
  }
  return line;
}

}  // namespace rayleigh
