#include "binwatch/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "binwatch/csv.hpp"
#include "binwatch/error.hpp"

namespace binwatch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  return out;
}

void write_json(const fs::path& p, const json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + p.string() + "': " + e.what());
  }
}

json stats_json(const SeriesStats& s) {
  json j{{"n", s.n}, {"mean", s.mean}, {"zero_share_pct", s.zero_share_pct}};
  j["cov_pct"] = s.cov_pct ? json(*s.cov_pct) : json(nullptr);
  return j;
}

json optional_vector(const std::optional<std::vector<double>>& v) { return v ? json(*v) : json(nullptr); }

void append_unique(std::vector<ModelSpec>& all, const std::vector<ModelSpec>& more) {
  for (const auto& s : more) {
    const auto key = model_key(s);
    if (std::none_of(all.begin(), all.end(), [&](const ModelSpec& x) { return model_key(x) == key; })) all.push_back(s);
  }
}

void check_hash(const RunConfig& cfg, const json& doc, const std::string& name) {
  if (!doc.contains("config_hash") || doc["config_hash"] != cfg.hash()) {
    throw DataError(name + " was produced with a different configuration; rerun that stage");
  }
}

bool is_number_or_null(const json& j) { return j.is_number() || j.is_null(); }

}  // namespace

InputData to_input(SyntheticData data) {
  return {std::move(data.events), std::move(data.weather), std::move(data.holidays)};
}

const std::vector<double>* HourlyForecasts::find(const std::string& key) const {
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i] == key) return &values[i];
  return nullptr;
}

EvalResult run_eval(const RunConfig& cfg, const InputData& in) {
  cfg.validate();
  EvalResult r;
  const auto cal = cfg.calendar(in.holidays);
  r.hourly = aggregate_hourly(in.events, cal, cfg.window);
  r.daily = aggregate_daily(r.hourly.series);
  r.dataset = build_dataset(r.daily, cal, in.weather);
  const auto& rows = r.dataset.rows;
  r.daily_stats = series_stats(r.daily);
  r.hourly_stats = series_stats(r.hourly.series);
  r.daily_acf = autocorrelation(r.daily.values, kAcfMaxLag);
  std::vector<double> hv(r.hourly.series.counts.begin(), r.hourly.series.counts.end());
  r.hourly_acf = autocorrelation(hv, kAcfMaxLag);

  r.folds = make_folds(rows.size(), cfg.cv_k, cfg.cv_seed);
  const auto history = std::make_shared<const DailySeries>(r.daily);
  const auto daily_specs = cfg.daily_specs();
  const auto hourly_specs = cfg.hourly_specs();
  std::vector<ModelSpec> all = daily_specs;
  append_unique(all, hourly_specs);

  std::vector<CvResult> cv;
  for (const auto& s : all) {
    cv.push_back(kfold_cv(rows, s, r.folds, history, cfg.exec()));
    r.daily_keys.push_back(cv.back().report.method);
    r.daily_oof.push_back(cv.back().oof_forecasts);
  }
  for (std::size_t i = 0; i < daily_specs.size(); ++i) r.daily_reports.push_back(cv[i].report);

  std::vector<Date> scored;
  for (const auto& row : rows) scored.push_back(row.date);
  const auto& hs = r.hourly.series;
  const auto first = static_cast<std::size_t>(
      std::find(hs.days.begin(), hs.days.end(), scored.front()) - hs.days.begin());
  auto& hf = r.hourly_forecasts;
  hf.actual.open_hour = hs.open_hour;
  hf.actual.hours_per_day = hs.hours_per_day;
  hf.actual.days.assign(hs.days.begin() + static_cast<long>(first), hs.days.end());
  hf.actual.counts.assign(hs.counts.begin() + static_cast<long>(first * static_cast<std::size_t>(hs.hours_per_day)),
                          hs.counts.end());
  if (hf.actual.days.size() != scored.size()) throw DataError("scored days are not contiguous");

  for (const auto& s : hourly_specs) {
    const auto key = model_key(s);
    const auto idx = static_cast<std::size_t>(std::find(r.daily_keys.begin(), r.daily_keys.end(), key) -
                                              r.daily_keys.begin());
    auto h = hourly_eval(key, model_label(s) + " mapped to hourly", scored, r.daily_oof[idx], hs, cfg.profile,
                         &r.folds);
    r.hourly_reports.push_back(h.report);
    hf.keys.push_back(key);
    hf.values.push_back(std::move(h.forecasts));
  }
  r.final_profile = compute_profiles(hs, add_days(hs.days.back(), 1), cfg.profile);
  return r;
}

SimResult run_simulate(const RunConfig& cfg, const HourlyForecasts& f) {
  cfg.validate();
  SimResult r;
  r.events = derive_events(f.actual.counts, cfg.bin);
  std::vector<ForecastSource> sources;
  for (std::size_t i = 0; i < f.keys.size(); ++i) sources.push_back({f.keys[i], f.values[i]});
  const auto policies = cfg.policy_specs();
  r.results = compare_policies(policies, r.events, sources, f.actual.size(), cfg.exec());
  return r;
}

json provenance(const RunConfig& cfg) {
  return {{"version", std::string(version())}, {"config_hash", cfg.hash()}, {"config", cfg.echo()}};
}

json eval_json(const RunConfig& cfg, const EvalResult& r) {
  json j = provenance(cfg);
  const auto& log = r.hourly.log;
  j["statistics"] = {{"daily", stats_json(r.daily_stats)},
                     {"hourly", stats_json(r.hourly_stats)},
                     {"out_of_hours",
                      {{"reattributed_items", log.reattributed_items},
                       {"reattributed_events", log.reattributed_events},
                       {"unplaced_items", log.unplaced_items},
                       {"unplaced_events", log.unplaced_events}}},
                     {"weather_filled_days", r.dataset.weather_filled.size()},
                     {"scored_days", r.dataset.rows.size()},
                     {"first_scored_date", format_date(r.dataset.rows.front().date)}};
  j["autocorrelation"] = {{"daily", optional_vector(r.daily_acf)}, {"hourly", optional_vector(r.hourly_acf)}};
  json profiles = json::array();
  for (int wd = 1; wd <= 7; ++wd) {
    if (!r.final_profile.has(wd)) continue;
    profiles.push_back({{"weekday", wd},
                        {"open_hour", r.final_profile.open_hour()},
                        {"days_used", r.final_profile.days_used(wd)},
                        {"fractions", r.final_profile.fractions(wd)}});
  }
  j["profiles"] = profiles;
  j["cv"] = {{"k", r.folds.k}, {"seed", cfg.cv_seed}, {"shuffle", std::string(kFoldShuffleAlgorithm)}};
  json daily = json::array();
  for (const auto& rep : r.daily_reports) daily.push_back(to_json(rep));
  json hourly = json::array();
  for (const auto& rep : r.hourly_reports) hourly.push_back(to_json(rep));
  j["daily_eval"] = daily;
  j["hourly_eval"] = hourly;
  return j;
}

json simulation_json(const RunConfig& cfg, const SimResult& r) {
  json j = provenance(cfg);
  j["bin"] = {{"headroom_items", cfg.bin.headroom_items},
              {"notification_threshold", cfg.bin.notification_threshold},
              {"full_capacity_items", cfg.bin.full_capacity_items}};
  j["n_events"] = r.events.size();
  json rows = json::array();
  for (const auto& p : r.results) rows.push_back(to_json(p));
  j["policies"] = rows;
  return j;
}

json report_json(const RunConfig& cfg, const json& eval, const json& simulation, const json& calibration) {
  check_hash(cfg, eval, files::kEvalJson);
  check_hash(cfg, simulation, files::kSimulationJson);
  json j = provenance(cfg);
  j["calibration"] = calibration.is_null() ? json(nullptr) : calibration.at("report");
  for (const char* k : {"statistics", "autocorrelation", "profiles", "cv", "daily_eval", "hourly_eval"}) j[k] = eval.at(k);
  j["simulation"] = {{"bin", simulation.at("bin")},
                     {"n_events", simulation.at("n_events")},
                     {"policies", simulation.at("policies")}};
  const auto problems = check_report_schema(j);
  if (!problems.empty()) throw DataError("report does not match its schema: " + problems.front());
  return j;
}

std::vector<std::string> check_report_schema(const json& r) {
  std::vector<std::string> p;
  auto need = [&](const json& obj, const std::string& path, const char* key, auto pred, const char* what) {
    if (!obj.is_object() || !obj.contains(key)) {
      p.push_back(path + key + ": missing");
      return false;
    }
    if (!pred(obj[key])) {
      p.push_back(path + key + ": expected " + what);
      return false;
    }
    return true;
  };
  auto is_obj = [](const json& j) { return j.is_object(); };
  auto is_arr = [](const json& j) { return j.is_array(); };
  auto is_str = [](const json& j) { return j.is_string(); };
  auto is_num = [](const json& j) { return j.is_number(); };
  auto num_or_null = [](const json& j) { return is_number_or_null(j); };
  auto arr_or_null = [](const json& j) { return j.is_array() || j.is_null(); };
  auto obj_or_null = [](const json& j) { return j.is_object() || j.is_null(); };

  need(r, "", "version", is_str, "string");
  if (need(r, "", "config_hash", is_str, "string") && r["config_hash"].get<std::string>().size() != 16) {
    p.push_back("config_hash: expected 16 hex digits");
  }
  need(r, "", "config", is_obj, "object");
  need(r, "", "calibration", obj_or_null, "object or null");
  if (need(r, "", "statistics", is_obj, "object")) {
    for (const char* s : {"daily", "hourly"}) {
      if (!need(r["statistics"], "statistics.", s, is_obj, "object")) continue;
      const auto path = std::string("statistics.") + s + ".";
      need(r["statistics"][s], path, "n", is_num, "number");
      need(r["statistics"][s], path, "mean", is_num, "number");
      need(r["statistics"][s], path, "cov_pct", num_or_null, "number or null");
      need(r["statistics"][s], path, "zero_share_pct", is_num, "number");
    }
  }
  if (need(r, "", "autocorrelation", is_obj, "object")) {
    need(r["autocorrelation"], "autocorrelation.", "daily", arr_or_null, "array or null");
    need(r["autocorrelation"], "autocorrelation.", "hourly", arr_or_null, "array or null");
  }
  if (need(r, "", "profiles", is_arr, "array")) {
    for (const auto& e : r["profiles"]) {
      need(e, "profiles[].", "weekday", is_num, "number");
      need(e, "profiles[].", "fractions", is_arr, "array");
    }
  }
  for (const char* table : {"daily_eval", "hourly_eval"}) {
    if (!need(r, "", table, is_arr, "array")) continue;
    const auto path = std::string(table) + "[].";
    for (const auto& e : r[table]) {
      need(e, path, "method", is_str, "string");
      need(e, path, "mae", is_num, "number");
      need(e, path, "mae_over_mean_pct", num_or_null, "number or null");
      need(e, path, "n", is_num, "number");
    }
  }
  if (need(r, "", "simulation", is_obj, "object")) {
    const auto& s = r["simulation"];
    need(s, "simulation.", "n_events", is_num, "number");
    if (need(s, "simulation.", "policies", is_arr, "array")) {
      for (const auto& e : s["policies"]) {
        need(e, "simulation.policies[].", "policy", is_str, "string");
        need(e, "simulation.policies[].", "hours_offset_or_method", is_str, "string");
        need(e, "simulation.policies[].", "pct_avoided", is_num, "number");
        need(e, "simulation.policies[].", "avg_hours_too_early", num_or_null, "number or null");
        need(e, "simulation.policies[].", "n_events", is_num, "number");
      }
    }
  }
  return p;
}

void write_summary(std::ostream& out, const json& r) {
  auto num = [](const json& j, int d) { return j.is_number() ? csv::format_fixed(j.get<double>(), d) : std::string("NA"); };
  out << "binwatch " << r["version"].get<std::string>() << "  config " << r["config_hash"].get<std::string>() << "\n\n";
  const auto& st = r["statistics"];
  out << "Daily:  n=" << st["daily"]["n"] << " mean=" << num(st["daily"]["mean"], 2)
      << " CoV=" << num(st["daily"]["cov_pct"], 2) << "%\n";
  out << "Hourly: n=" << st["hourly"]["n"] << " mean=" << num(st["hourly"]["mean"], 2)
      << " CoV=" << num(st["hourly"]["cov_pct"], 2) << "% zero hours=" << num(st["hourly"]["zero_share_pct"], 2)
      << "%\n";
  if (r["calibration"].is_object()) {
    out << "Calibration: " << (r["calibration"]["all_pass"].get<bool>() ? "all bands pass" : "band violated") << '\n';
  }
  for (const char* table : {"daily_eval", "hourly_eval"}) {
    out << '\n' << (std::string(table) == "daily_eval" ? "Daily forecasts" : "Hourly forecasts (mapped)") << '\n';
    out << "  method                 MAE      MAE/Mean\n";
    for (const auto& e : r[table]) {
      auto m = e["method"].get<std::string>();
      m.resize(std::max<std::size_t>(m.size(), 20), ' ');
      out << "  " << m << ' ' << num(e["mae"], 2) << "    " << num(e["mae_over_mean_pct"], 2) << "%\n";
    }
  }
  const auto& s = r["simulation"];
  out << "\nSimulation (" << s["n_events"] << " bin-full events)\n";
  out << "  policy        offset/method   avoided%   hours early\n";
  for (const auto& e : s["policies"]) {
    auto a = e["policy"].get<std::string>();
    auto b = e["hours_offset_or_method"].get<std::string>();
    a.resize(std::max<std::size_t>(a.size(), 12), ' ');
    b.resize(std::max<std::size_t>(b.size(), 14), ' ');
    auto pct = num(e["pct_avoided"], 2);
    pct.insert(0, pct.size() < 6 ? 6 - pct.size() : 0, ' ');
    out << "  " << a << "  " << b << "  " << pct << "     " << num(e["avg_hours_too_early"], 2) << '\n';
  }
}

void write_hourly_forecasts(std::ostream& out, const HourlyForecasts& f) {
  out << "timestamp,actual";
  for (const auto& k : f.keys) out << ',' << k;
  out << '\n';
  for (std::size_t s = 0; s < f.actual.size(); ++s) {
    out << format_datetime(f.actual.slot_time(s)) << ',' << f.actual.counts[s];
    for (const auto& v : f.values) out << ',' << csv::format_double(v[s]);
    out << '\n';
  }
}

HourlyForecasts read_hourly_forecasts(std::istream& in, int open_hour, int hours_per_day) {
  const auto table = csv::read_table(in);
  if (table.header.size() < 2 || table.header[0] != "timestamp" || table.header[1] != "actual") {
    throw DataError("hourly forecasts: header must start with 'timestamp,actual'");
  }
  HourlyForecasts f;
  f.actual.open_hour = open_hour;
  f.actual.hours_per_day = hours_per_day;
  f.keys.assign(table.header.begin() + 2, table.header.end());
  f.values.resize(f.keys.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto line = i + 2;
    DateTime t;
    try {
      t = parse_datetime(row[0]);
    } catch (const std::exception& e) {
      throw ParseError(line, e.what());
    }
    const auto h = static_cast<int>(i % static_cast<std::size_t>(hours_per_day));
    if (t.hour != open_hour + h) throw ParseError(line, "slot out of sequence");
    if (h == 0) f.actual.days.push_back(t.date);
    else if (t.date != f.actual.days.back()) throw ParseError(line, "slot out of sequence");
    const auto a = csv::parse_int(row[1]);
    if (!a || *a < 0) throw ParseError(line, "bad actual count");
    f.actual.counts.push_back(*a);
    for (std::size_t k = 0; k < f.keys.size(); ++k) {
      const auto v = csv::parse_double(row[k + 2]);
      if (!v) throw ParseError(line, "bad forecast for " + f.keys[k]);
      f.values[k].push_back(*v);
    }
  }
  if (f.actual.counts.size() % static_cast<std::size_t>(hours_per_day) != 0) {
    throw DataError("hourly forecasts: incomplete last day");
  }
  if (f.actual.counts.empty()) throw DataError("hourly forecasts: no rows");
  return f;
}

bool stage_generate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  fs::create_directories(out_dir);
  const auto data = generate(cfg.synthetic_config());
  {
    auto out = open_out(cfg.resolve(out_dir, cfg.paths.events));
    write_events(out, data.events);
  }
  {
    auto out = open_out(cfg.resolve(out_dir, cfg.paths.weather));
    write_weather(out, data.weather);
  }
  {
    auto out = open_out(cfg.resolve(out_dir, cfg.paths.holidays));
    write_holidays(out, data.holidays);
  }
  const auto report = calibration_report(data.events, cfg.calendar(data.holidays), cfg.window, cfg.calibration);
  json j = provenance(cfg);
  j["n_events"] = data.events.size();
  j["report"] = to_json(report);
  write_json(out_dir / files::kCalibration, j);
  log << "generated " << data.events.size() << " events, " << data.weather.size() << " weather days, "
      << data.holidays.size() << " holidays\n";
  print(log, report);
  return report.all_pass();
}

InputData load_inputs(const RunConfig& cfg, const fs::path& out_dir) {
  std::vector<std::string> missing;
  for (const auto& p : {cfg.paths.events, cfg.paths.weather, cfg.paths.holidays}) {
    if (!fs::exists(cfg.resolve(out_dir, p))) missing.push_back(cfg.resolve(out_dir, p).string());
  }
  if (!missing.empty()) {
    std::string msg = "missing input files (run `generate` or set [paths]):";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }
  InputData in;
  in.events = ingest_events(cfg.resolve(out_dir, cfg.paths.events));
  in.weather = read_weather(cfg.resolve(out_dir, cfg.paths.weather));
  in.holidays = read_holidays(cfg.resolve(out_dir, cfg.paths.holidays));
  return in;
}

void stage_eval(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  const auto in = load_inputs(cfg, out_dir);
  fs::create_directories(out_dir);
  const auto r = run_eval(cfg, in);
  {
    auto out = open_out(out_dir / files::kDataset);
    write_dataset(out, r.dataset.rows);
  }
  {
    auto out = open_out(out_dir / files::kEvalDaily);
    write_table(out, r.daily_reports);
  }
  {
    auto out = open_out(out_dir / files::kEvalHourly);
    write_table(out, r.hourly_reports);
  }
  {
    auto out = open_out(out_dir / files::kDailyForecasts);
    out << "date,actual,fold";
    for (const auto& k : r.daily_keys) out << ',' << k;
    out << '\n';
    for (std::size_t i = 0; i < r.dataset.rows.size(); ++i) {
      out << format_date(r.dataset.rows[i].date) << ',' << csv::format_double(r.dataset.rows[i].target) << ','
          << r.folds.fold_of[i];
      for (const auto& v : r.daily_oof) out << ',' << csv::format_double(v[i]);
      out << '\n';
    }
  }
  {
    auto out = open_out(out_dir / files::kHourlyForecasts);
    write_hourly_forecasts(out, r.hourly_forecasts);
  }
  {
    auto out = open_out(out_dir / files::kProfile);
    write_profile(out, r.final_profile);
  }
  write_json(out_dir / files::kEvalJson, eval_json(cfg, r));
  log << "evaluated " << r.daily_keys.size() << " models on " << r.dataset.rows.size() << " scored days\n";
  write_table(log, r.daily_reports);
  write_table(log, r.hourly_reports);
}

void stage_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  const auto path = out_dir / files::kHourlyForecasts;
  std::ifstream in(path);
  if (!in) throw DataError("missing hourly forecasts '" + path.string() + "' (run `eval` first)");
  const auto f = read_hourly_forecasts(in, cfg.open_hour, cfg.close_hour - cfg.open_hour);
  const auto r = run_simulate(cfg, f);
  {
    auto out = open_out(out_dir / files::kSimulationCsv);
    write_table(out, r.results);
  }
  write_json(out_dir / files::kSimulationJson, simulation_json(cfg, r));
  log << "simulated " << r.events.size() << " bin-full events\n";
  write_table(log, r.results);
}

void stage_report(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  std::vector<std::string> missing;
  if (!fs::exists(out_dir / files::kEvalJson)) missing.push_back(std::string(files::kEvalJson) + " (stage `eval`)");
  if (!fs::exists(out_dir / files::kSimulationJson)) {
    missing.push_back(std::string(files::kSimulationJson) + " (stage `simulate`)");
  }
  if (!missing.empty()) {
    std::string msg = "missing upstream artifacts:";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }
  json calibration = nullptr;
  if (fs::exists(out_dir / files::kCalibration)) {
    calibration = read_json(out_dir / files::kCalibration);
  }
  const auto report =
      report_json(cfg, read_json(out_dir / files::kEvalJson), read_json(out_dir / files::kSimulationJson), calibration);
  write_json(out_dir / files::kReportJson, report);
  std::ostringstream summary;
  write_summary(summary, report);
  {
    auto out = open_out(out_dir / files::kReportText);
    out << summary.str();
  }
  log << summary.str();
}

}  // namespace binwatch
