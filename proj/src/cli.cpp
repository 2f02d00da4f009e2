#include "pfl/cli.hpp"

#include "json_util.hpp"
#include "pfl/ccfm.hpp"
#include "pfl/contact_model.hpp"
#include "pfl/cost.hpp"
#include "pfl/dynamics.hpp"
#include "pfl/errors.hpp"
#include "pfl/format.hpp"
#include "pfl/impact_sim.hpp"
#include "pfl/risk_engine.hpp"
#include "pfl/robot_model.hpp"
#include "pfl/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace pfl::cli {

namespace {

using detail::json;

constexpr double kNewtonPerMillimetre = 1000.0;

/// Input problem detected after argument parsing; reported with exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') {
      throw InputError(std::string("invalid number '") + cell + "' in " + what);
    }
    values.push_back(v);
  }
  return values;
}

Eigen::Vector3d parse_vector3(const std::string& text, const char* what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3) throw InputError(std::string(what) + " needs three comma-separated values");
  return {v[0], v[1], v[2]};
}

JointConfiguration parse_configuration(const std::string& text) {
  const auto v = parse_list(text, "joint configuration");
  return JointConfiguration(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::optional<std::string> body_parts_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PFL_BODY_PARTS"); env != nullptr && *env != '\0') {
    return std::string(env);
  }
  return std::nullopt;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write file: " + path);
  file << content;
}

json num(double v) { return round_significant(v); }

// Shared option bundle resolving mu and k from explicit values or a body part.
struct MassOptions {
  double mu = 0.0;
  double m_r = 0.0;
  double m_h = 0.0;
  double k_nmm = 0.0;
  std::string body_part;
  std::string body_parts_file;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* m_r_opt = nullptr;
  CLI::Option* m_h_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* part_opt = nullptr;

  void add_to(CLI::App& app) {
    mu_opt = app.add_option("--mu", mu, "effective mass [kg]");
    m_r_opt = app.add_option("--m-r", m_r, "robot mass [kg]");
    m_h_opt = app.add_option("--m-h", m_h, "human body part mass [kg]; omit for a clamped part");
    k_opt = app.add_option("--k-nmm", k_nmm, "body part stiffness [N/mm]");
    part_opt = app.add_option("--body-part", body_part, "body part supplying k and m_h");
    app.add_option("--body-parts", body_parts_file, "body-part data file (JSON)");
    mu_opt->excludes(m_r_opt);
    mu_opt->excludes(m_h_opt);
  }

  const BodyPartParams* part(BodyPartTable& table) const {
    if (part_opt->count() == 0) return nullptr;
    return &table.lookup(body_part);
  }

  double stiffness(const BodyPartParams* part) const {
    if (k_opt->count() > 0) return k_nmm * kNewtonPerMillimetre;
    if (part != nullptr) return part->stiffness;
    throw InputError("give --k-nmm or --body-part");
  }

  double effective(const BodyPartParams* part) const {
    if (mu_opt->count() > 0) return mu;
    if (m_r_opt->count() == 0) throw InputError("give --mu or --m-r");
    if (m_h_opt->count() > 0) return effective_mass(m_r, HumanMass::finite(m_h));
    if (part != nullptr) return effective_mass(m_r, HumanMass::finite(part->effective_mass));
    return effective_mass(m_r, HumanMass::infinite());
  }
};

std::string prompt(std::ostream& out, std::istream& in, const std::string& question,
                   const std::string& choices) {
  out << question;
  if (!choices.empty()) out << " [" << choices << "]";
  out << ": " << std::flush;
  std::string answer;
  if (!std::getline(in, answer)) throw InputError("unexpected end of input");
  while (!answer.empty() && (answer.back() == '\r' || answer.back() == ' ')) answer.pop_back();
  return answer;
}

template <typename Parser>
auto ask(std::ostream& out, std::istream& in, const std::string& question,
         const std::string& choices, Parser parser) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      return parser(prompt(out, in, question, choices));
    } catch (const std::invalid_argument& e) {
      out << "  " << e.what() << "\n";
    }
  }
  throw InputError("too many invalid answers for: " + question);
}

ScenarioFile interactive_scenario(std::ostream& out, std::istream& in) {
  ScenarioFile file;
  ContactScenario& s = file.scenario;
  s.event_type = ask(out, in, "contact event type", "constrained/unconstrained", parse_event_type);
  s.force_phase = ask(out, in, "contact force phase", "phase_I_dynamic/phase_II_quasistatic",
                      parse_force_phase);
  const auto cls = classify_scenario(s.event_type, s.force_phase);
  if (cls.consistency == Consistency::conflicting) {
    out << "  note: this combination is labelled both transient and quasi-static\n";
  }
  if (s.event_type == EventType::constrained && s.force_phase == ForcePhase::phase_II_quasistatic) {
    s.configuration = ask(out, in, "robot configuration",
                          "non_singular/near_singular/auto_from_dynamics",
                          parse_configuration_class);
  }
  s.geometry = ask(out, in, "contact geometry", "blunt/sharp", parse_geometry);
  s.injury_measure = ask(out, in, "injury measure",
                         "force_pressure/energy_density/compression_criterion/ao_classification",
                         parse_injury_measure);
  file.interpretation = ask(out, in, "interpretation", "A/B1/B2/C/D", parse_interpretation_id);
  s.body_part = prompt(out, in, "body part", "");
  const auto& interp = interpretation(file.interpretation);
  if (interp.estimation == Estimation::model) {
    s.velocity = ask(out, in, "relative velocity [m/s]", "", [](const std::string& t) {
      const auto v = parse_list(t, "velocity");
      if (v.size() != 1) throw std::invalid_argument("expected one number");
      return v[0];
    });
  }
  const bool needs_dynamics =
      (interp.mass_spec && interp.mass_spec->robot_mass_mode == RobotMassMode::reflected) ||
      s.configuration == ConfigurationClass::auto_from_dynamics;
  if (needs_dynamics) {
    s.joint_configuration = parse_configuration(prompt(out, in, "joint configuration", "q1,q2,..."));
    const Eigen::Vector3d u = parse_vector3(prompt(out, in, "impact direction", "x,y,z"), "direction");
    // The contact point is resolved against the flange once the robot is loaded.
    s.contact.emplace(Eigen::Vector3d::Zero(), u, "");
  }
  return file;
}

int cmd_assess(const std::string& scenario_path, const std::string& robot_flag,
               const std::string& interp_flag, const std::string& parts_flag, bool json_out,
               bool interactive, std::ostream& out, std::istream& in) {
  ScenarioFile file;
  if (interactive) {
    file = interactive_scenario(out, in);
  } else {
    if (scenario_path.empty()) throw InputError("--scenario is required (or use --interactive)");
    file = parse_scenario(detail::read_file(scenario_path));
  }
  if (!interp_flag.empty()) file.interpretation = parse_interpretation_id(interp_flag);
  if (!robot_flag.empty()) file.robot_path = robot_flag;

  std::optional<RobotModel> model;
  if (file.robot_path) model = load_robot(*file.robot_path);

  ContactScenario& s = file.scenario;
  if (s.contact && s.contact->attached_link().empty()) {
    if (!model) throw InputError("a robot description is required for the contact frame");
    if (!s.joint_configuration) throw InputError("a joint configuration is required");
    const auto frames = forward_kinematics(*model, *s.joint_configuration);
    const auto flange = model->flange_index();
    s.contact.emplace(frames[flange].translation(), s.contact->direction(),
                      model->links()[flange].name);
  }
  const BodyPartTable parts = load_body_part_table(body_parts_path(parts_flag));
  const AssessmentReport report =
      assess(model ? &*model : nullptr, s, interpretation(file.interpretation), parts);
  out << (json_out ? report_to_json(report) : report_to_text(report));
  return report.verdict == Verdict::safe ? kSuccess : kAssessmentFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Power-and-force-limiting risk assessment toolkit", "pfl"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "machine-readable output");

  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", json_out, "machine-readable output"); };

  // assess
  auto* assess_cmd = app.add_subcommand("assess", "walk the risk-assessment decision tree");
  std::string scenario_path, robot_flag, interp_flag, parts_flag;
  bool interactive = false;
  assess_cmd->add_option("--scenario", scenario_path, "scenario file (JSON)");
  assess_cmd->add_option("--robot", robot_flag, "robot description, overrides the scenario");
  assess_cmd->add_option("--interpretation", interp_flag, "A, B1, B2, C or D");
  assess_cmd->add_option("--body-parts", parts_flag, "body-part data file (JSON)");
  assess_cmd->add_flag("--interactive", interactive, "answer the decision-tree questions on stdin");
  json_flag(assess_cmd);

  // predict-force
  auto* predict_cmd = app.add_subcommand("predict-force", "peak contact force v*sqrt(mu*k)");
  MassOptions predict_mass;
  double predict_v = 0.0;
  double predict_fmax = 0.0;
  predict_cmd->add_option("--v,--velocity", predict_v, "relative velocity [m/s]")->required();
  auto* predict_fmax_opt = predict_cmd->add_option("--f-max", predict_fmax, "force limit to compare with [N]");
  predict_mass.add_to(*predict_cmd);
  json_flag(predict_cmd);

  // limit-velocity
  auto* limit_cmd = app.add_subcommand("limit-velocity", "velocity reaching a force limit");
  MassOptions limit_mass;
  double limit_fmax = 0.0;
  auto* limit_fmax_opt = limit_cmd->add_option("--f-max", limit_fmax, "force limit [N]");
  bool limit_quasistatic = false;
  limit_cmd->add_flag("--quasistatic", limit_quasistatic, "use the body part's quasi-static limit");
  limit_mass.add_to(*limit_cmd);
  json_flag(limit_cmd);

  // analyze-trace
  auto* trace_cmd = app.add_subcommand("analyze-trace", "evaluate a force-time trace");
  std::string trace_path, trace_part, trace_parts_flag;
  double phase_boundary = kDefaultPhaseBoundary;
  trace_cmd->add_option("--trace", trace_path, "CSV with header time_s,force_N")->required();
  trace_cmd->add_option("--body-part", trace_part, "body part")->required();
  trace_cmd->add_option("--body-parts", trace_parts_flag, "body-part data file (JSON)");
  trace_cmd->add_option("--phase-boundary", phase_boundary, "transient/quasi-static split [s]")
      ->capture_default_str();
  json_flag(trace_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "1-D spring-damper impact simulation");
  ImpactConfig sim;
  double sim_human_mass = 0.0;
  double sim_k_nmm = 75.0;
  double sim_detection = 0.0;
  std::string sim_out;
  sim_cmd->add_option("--robot-mass", sim.robot_mass, "robot mass [kg]")->required();
  sim_cmd->add_option("--velocity", sim.robot_velocity, "approach velocity [m/s]")->required();
  auto* sim_human_opt = sim_cmd->add_option("--human-mass", sim_human_mass,
                                            "body part mass [kg]; omit for a clamped part");
  sim_cmd->add_option("--k-nmm", sim_k_nmm, "stiffness [N/mm]")->capture_default_str();
  sim_cmd->add_option("--damping", sim.damping, "damping [N s/m]")->capture_default_str();
  auto* sim_detection_opt = sim_cmd->add_option("--detection-force", sim_detection,
                                                "collision detection threshold [N]");
  sim_cmd->add_option("--reaction-delay", sim.reaction_delay, "detection to retraction [s]")
      ->capture_default_str();
  sim_cmd->add_option("--retraction-velocity", sim.retraction_velocity, "retraction speed [m/s]")
      ->capture_default_str();
  sim_cmd->add_option("--drive-force", sim.drive_force, "sustained drive push in contact [N]")
      ->capture_default_str();
  sim_cmd->add_option("--duration", sim.duration, "simulated time [s]")->capture_default_str();
  sim_cmd->add_option("--dt", sim.dt, "time step [s]")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "trace CSV path (stdout when omitted)");
  json_flag(sim_cmd);

  // ccfm
  auto* ccfm_cmd = app.add_subcommand("ccfm", "constrained collision force map");
  std::string ccfm_robot, ccfm_part, ccfm_parts_flag, ccfm_positions, ccfm_source = "model_B1";
  std::string ccfm_out, ccfm_svg, ccfm_import, ccfm_direction = "1,0,0", ccfm_link;
  std::vector<std::string> ccfm_configs;
  double vmin = 0.05, vmax = 1.5, vstep = 0.05, ccfm_threshold = 0.0;
  ccfm_cmd->add_option("--robot", ccfm_robot, "robot description (JSON)");
  ccfm_cmd->add_option("--body-part", ccfm_part, "body part")->required();
  ccfm_cmd->add_option("--body-parts", ccfm_parts_flag, "body-part data file (JSON)");
  ccfm_cmd->add_option("--positions", ccfm_positions,
                       "comma-separated position labels (default: all reference positions)");
  ccfm_cmd->add_option("--vmin", vmin, "lowest velocity [m/s]")->capture_default_str();
  ccfm_cmd->add_option("--vmax", vmax, "highest velocity [m/s]")->capture_default_str();
  ccfm_cmd->add_option("--vstep", vstep, "velocity step [m/s]")->capture_default_str();
  ccfm_cmd->add_option("--source", ccfm_source,
                       "model_A, model_B1, model_B2, simulated or measured-import")
      ->capture_default_str();
  ccfm_cmd->add_option("--configuration", ccfm_configs,
                       "LABEL=q1,q2,... joint configuration realizing a position");
  ccfm_cmd->add_option("--direction", ccfm_direction, "impact direction x,y,z")
      ->capture_default_str();
  ccfm_cmd->add_option("--contact-link", ccfm_link, "link carrying the contact (default flange)");
  ccfm_cmd->add_option("--import", ccfm_import, "measured map CSV (source measured-import)");
  auto* ccfm_threshold_opt = ccfm_cmd->add_option(
      "--threshold", ccfm_threshold, "force limit for the velocity lookup [N] (default: transient)");
  ccfm_cmd->add_option("--out", ccfm_out, "CSV output path (stdout when omitted)");
  ccfm_cmd->add_option("--svg", ccfm_svg, "SVG heatmap output path");
  json_flag(ccfm_cmd);

  // cost
  auto* cost_cmd = app.add_subcommand("cost", "time estimate of experimental validation");
  CostParams cost_params;
  int cost_positions = 1, cost_parts = 1;
  double per_config = 0.0;
  cost_cmd->add_option("--positions", cost_positions, "contact positions")->required();
  cost_cmd->add_option("--parts", cost_parts, "body parts")->required();
  cost_cmd->add_option("--setup", cost_params.setup_h, "setup per configuration [h]")->capture_default_str();
  cost_cmd->add_option("--adjust", cost_params.adjust_h, "per speed adjustment [h]")->capture_default_str();
  cost_cmd->add_option("--repeat", cost_params.repeat_h, "per repetition [h]")->capture_default_str();
  cost_cmd->add_option("--repeats", cost_params.repeats, "repetitions")->capture_default_str();
  cost_cmd->add_option("--trials", cost_params.trials, "speed adjustments")->capture_default_str();
  auto* per_config_opt = cost_cmd->add_option("--per-config", per_config,
                                              "per-configuration cost [h], overrides the breakdown");
  json_flag(cost_cmd);

  // robot-info
  auto* info_cmd = app.add_subcommand("robot-info", "masses of a robot description");
  std::string info_robot, info_q, info_link;
  std::vector<std::string> info_directions;
  info_cmd->add_option("--robot", info_robot, "robot description (JSON)")->required();
  info_cmd->add_option("--q", info_q, "joint configuration q1,q2,...");
  info_cmd->add_option("--link", info_link, "contact link (default flange)");
  info_cmd->add_option("--direction", info_directions, "impact direction x,y,z (repeatable)");
  json_flag(info_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  }

  try {
    if (assess_cmd->parsed()) {
      return cmd_assess(scenario_path, robot_flag, interp_flag, parts_flag, json_out, interactive,
                        out, in);
    }

    if (predict_cmd->parsed()) {
      BodyPartTable table = load_body_part_table(body_parts_path(predict_mass.body_parts_file));
      const BodyPartParams* part = predict_mass.part(table);
      const double mu = predict_mass.effective(part);
      const double k = predict_mass.stiffness(part);
      const double force = contact_force(predict_v, mu, k);
      std::optional<double> limit;
      if (predict_fmax_opt->count() > 0) limit = predict_fmax;
      else if (part != nullptr) limit = part->transient_force_limit;
      const bool pass = !limit || force <= *limit;
      if (json_out) {
        json j = {{"force_N", num(force)}, {"mu_kg", num(mu)}, {"k_N_per_m", num(k)},
                  {"velocity_m_s", num(predict_v)}};
        j["limit_N"] = limit ? num(*limit) : json(nullptr);
        j["pass"] = pass;
        out << j.dump(2) << "\n";
      } else {
        out << "predicted force: " << format_number(force) << " N\n";
        if (limit) out << "limit: " << format_number(*limit) << " N (" << (pass ? "pass" : "fail") << ")\n";
      }
      return pass ? kSuccess : kAssessmentFailed;
    }

    if (limit_cmd->parsed()) {
      BodyPartTable table = load_body_part_table(body_parts_path(limit_mass.body_parts_file));
      const BodyPartParams* part = limit_mass.part(table);
      double f_max = limit_fmax;
      if (limit_fmax_opt->count() == 0) {
        if (part == nullptr) throw InputError("give --f-max or --body-part");
        f_max = limit_quasistatic ? part->quasistatic_force_limit : part->transient_force_limit;
      }
      const double mu = limit_mass.effective(part);
      const double k = limit_mass.stiffness(part);
      const double v = velocity_limit(f_max, mu, k);
      if (json_out) {
        out << json{{"velocity_limit_m_s", num(v)}, {"f_max_N", num(f_max)}, {"mu_kg", num(mu)},
                    {"k_N_per_m", num(k)}}.dump(2)
            << "\n";
      } else {
        out << "velocity limit: " << format_number(v) << " m/s\n";
      }
      return kSuccess;
    }

    if (trace_cmd->parsed()) {
      const BodyPartTable table = load_body_part_table(body_parts_path(trace_parts_flag));
      const ForceTrace trace = parse_trace(detail::read_file(trace_path));
      const TraceVerdict verdict = evaluate_trace(trace, table.lookup(trace_part), phase_boundary);
      out << (json_out ? verdict_to_json(verdict) : verdict_to_text(verdict));
      return verdict.all_pass() ? kSuccess : kAssessmentFailed;
    }

    if (sim_cmd->parsed()) {
      sim.human_mass = sim_human_opt->count() > 0 ? HumanMass::finite(sim_human_mass)
                                                  : HumanMass::infinite();
      sim.stiffness = sim_k_nmm * kNewtonPerMillimetre;
      if (sim_detection_opt->count() > 0) sim.detection_force = sim_detection;
      const ForceTrace trace = simulate(sim);
      const std::string csv = write_trace(trace);
      double peak = 0.0;
      for (const auto& s : trace.samples()) peak = std::max(peak, s.force);
      if (!sim_out.empty()) write_file(sim_out, csv);
      if (json_out) {
        json j = {{"samples", trace.size()}, {"peak_force_N", num(peak)}, {"effective_mass_kg", num(sim.effective_mass())}};
        if (!sim_out.empty()) j["artifacts"] = json::array({sim_out});
        out << j.dump(2) << "\n";
      } else if (sim_out.empty()) {
        out << csv;
      } else {
        out << "peak force: " << format_number(peak) << " N\n" << "wrote " << sim_out << "\n";
      }
      return kSuccess;
    }

    if (ccfm_cmd->parsed()) {
      const BodyPartTable table = load_body_part_table(body_parts_path(ccfm_parts_flag));
      const BodyPartParams& part = table.lookup(ccfm_part);
      const MapSource source = parse_map_source(ccfm_source);
      CCFMGrid grid;
      if (source == MapSource::measured_import) {
        if (ccfm_import.empty()) throw InputError("--import is required for measured-import");
        grid = parse_map_csv(detail::read_file(ccfm_import), "", part.name);
      } else {
        if (ccfm_robot.empty()) throw InputError("--robot is required");
        const RobotModel model = load_robot(ccfm_robot);
        grid.robot = model.name();
        MapRequest request;
        request.source = source;
        request.velocities = velocity_grid(vmin, vmax, vstep);
        request.direction = parse_vector3(ccfm_direction, "--direction");
        request.contact_link = ccfm_link;
        for (const auto& entry : ccfm_configs) {
          const auto eq = entry.find('=');
          if (eq == std::string::npos) throw InputError("--configuration expects LABEL=q1,q2,...");
          request.configurations.emplace(entry.substr(0, eq), parse_configuration(entry.substr(eq + 1)));
        }
        if (ccfm_positions.empty()) {
          for (const auto& [label, p] : model.reference_positions()) request.positions.push_back(label);
          for (const auto& [label, q] : request.configurations) {
            if (!model.reference_positions().count(label)) request.positions.push_back(label);
          }
        } else {
          std::stringstream stream(ccfm_positions);
          std::string label;
          while (std::getline(stream, label, ',')) request.positions.push_back(label);
        }
        grid = generate_map(model, part, request);
      }
      const double threshold =
          ccfm_threshold_opt->count() > 0 ? ccfm_threshold : part.transient_force_limit;
      const std::string csv = export_map_csv(grid);
      if (!ccfm_out.empty()) write_file(ccfm_out, csv);
      if (!ccfm_svg.empty()) {
        write_file(ccfm_svg, export_map_svg(grid, {part.transient_force_limit, part.quasistatic_force_limit}));
      }
      if (json_out) {
        json lookups = json::object();
        for (const auto& p : grid.positions) {
          const auto v = lookup_max_velocity(grid, threshold, p.label);
          lookups[p.label] = v ? num(*v) : json("none");
        }
        json forces = json::array();
        for (Eigen::Index r = 0; r < grid.forces.rows(); ++r) {
          json row = json::array();
          for (Eigen::Index c = 0; c < grid.forces.cols(); ++c) row.push_back(num(grid.forces(r, c)));
          forces.push_back(row);
        }
        json positions = json::array();
        for (const auto& p : grid.positions) positions.push_back(p.label);
        json velocities = json::array();
        for (double v : grid.velocities) velocities.push_back(num(v));
        json artifacts = json::array();
        if (!ccfm_out.empty()) artifacts.push_back(ccfm_out);
        if (!ccfm_svg.empty()) artifacts.push_back(ccfm_svg);
        out << json{{"robot", grid.robot},
                    {"body_part", grid.body_part},
                    {"source", to_string(grid.source)},
                    {"positions", positions},
                    {"velocities_m_s", velocities},
                    {"forces_N", forces},
                    {"threshold_N", num(threshold)},
                    {"max_velocity_m_s", lookups},
                    {"artifacts", artifacts}}
                   .dump(2)
            << "\n";
      } else {
        if (ccfm_out.empty()) out << csv;
        for (const auto& p : grid.positions) {
          const auto v = lookup_max_velocity(grid, threshold, p.label);
          out << "max velocity at " << p.label << " for " << format_number(threshold)
              << " N: " << (v ? format_number(*v) + " m/s" : std::string("none")) << "\n";
        }
      }
      return kSuccess;
    }

    if (cost_cmd->parsed()) {
      const double per = per_config_opt->count() > 0 ? per_config : cost_per_configuration(cost_params);
      const double total = round_hours(cost_total(per, cost_positions, cost_parts));
      if (json_out) {
        out << json{{"per_configuration_h", num(per)}, {"positions", cost_positions},
                    {"body_parts", cost_parts}, {"total_h", num(total)}}
                   .dump(2)
            << "\n";
      } else {
        out << "per configuration: " << format_number(per) << " h\n";
        out << "total: " << format_fixed2(total) << " h\n";
      }
      return kSuccess;
    }

    if (info_cmd->parsed()) {
      const RobotModel model = load_robot(info_robot);
      const double moving = total_moving_mass(model);
      const double iso = iso_robot_mass(moving, model.payload_mass() + model.adapter_mass());
      json j = {{"name", model.name()},
                {"dof", model.dof()},
                {"total_moving_mass_kg", num(moving)},
                {"iso_robot_mass_kg", num(iso)}};
      std::ostringstream text;
      text << "name: " << model.name() << "\n"
           << "dof: " << model.dof() << "\n"
           << "total moving mass: " << format_number(moving) << " kg\n"
           << "robot mass (M/2 + m_L): " << format_number(iso) << " kg\n";
      if (!info_q.empty()) {
        const JointConfiguration q = parse_configuration(info_q);
        std::size_t link = model.flange_index();
        if (!info_link.empty()) {
          const auto index = model.link_index(info_link);
          if (!index) throw InputError("unknown link '" + info_link + "'");
          link = *index;
        }
        const Eigen::Vector3d point = forward_kinematics(model, q)[link].translation();
        std::vector<Eigen::Vector3d> directions;
        for (const auto& d : info_directions) directions.push_back(parse_vector3(d, "--direction"));
        if (directions.empty()) {
          directions = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
        }
        json reflected = json::array();
        text << "contact point (" << model.links()[link].name << "): " << format_number(point.x())
             << ", " << format_number(point.y()) << ", " << format_number(point.z()) << " m\n";
        for (const auto& d : directions) {
          const ContactFrame contact(point, d, model.links()[link].name);
          const ReflectedMass m = reflected_mass(model, q, contact);
          const Eigen::Vector3d& u = contact.direction();
          const std::string label = format_number(u.x()) + "," + format_number(u.y()) + "," + format_number(u.z());
          reflected.push_back({{"direction", {num(u.x()), num(u.y()), num(u.z())}},
                               {"reflected_mass_kg", m.bounded() ? num(m.kg()) : json("unbounded")}});
          text << "reflected mass along (" << label
               << "): " << (m.bounded() ? format_number(m.kg()) + " kg" : std::string("unbounded")) << "\n";
        }
        j["contact_point_m"] = {num(point.x()), num(point.y()), num(point.z())};
        j["reflected_mass"] = reflected;
      }
      out << (json_out ? j.dump(2) + "\n" : text.str());
      return kSuccess;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace pfl::cli
