#include "cbpa/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace cbpa {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

const char* colour(Index k) { return kPalette[static_cast<std::size_t>(k) % kPalette.size()]; }

std::string join(const std::vector<std::string>& parts, char sep)
{
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void svg_open(std::ostream& out, double width, double height)
{
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

} // namespace

std::string format_number(Scalar value)
{
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(6);
  s << value;
  return s.str();
}

void write_result_csv(std::ostream& out, const AllocationResult& result, const Scenario& scenario,
                      const GainParams& params)
{
  out << "task,winners,alloc_a,alloc_b,start_time,residual_a,residual_b,gain\n";
  const AgentBelief& b = result.consensus();
  for (Index j = 0; j < scenario.num_tasks(); ++j) {
    std::vector<std::string> winners, alloc_a, alloc_b;
    for (Index k = 0; k < scenario.num_robots(); ++k) {
      if (!b.winners(j, k)) continue;
      winners.push_back(std::to_string(k));
      alloc_a.push_back(format_number(b.alloc_a(j, k)));
      alloc_b.push_back(format_number(b.alloc_b(j, k)));
    }
    const auto id = static_cast<TaskId>(j);
    out << j << ',' << join(winners, ';') << ',' << join(alloc_a, ';') << ',' << join(alloc_b, ';') << ','
        << format_number(result.start_times(j)) << ','
        << format_number(residual_demand(b, scenario, id, PayloadKind::A)) << ','
        << format_number(residual_demand(b, scenario, id, PayloadKind::B)) << ','
        << format_number(result_task_gain(result, scenario, id, params)) << '\n';
  }
}

void write_paths_csv(std::ostream& out, const AllocationResult& result, const Scenario& scenario)
{
  out << "robot,order,task,arrival\n";
  const AgentBelief& b = result.consensus();
  for (Index k = 0; k < scenario.num_robots(); ++k) {
    const TaskList& path = result.paths[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < path.size(); ++i)
      out << k << ',' << i << ',' << path[i] << ',' << format_number(b.times(path[i], k)) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<MetricsReport>& rows)
{
  out << "algorithm,converged,iterations,avg_start_time,mean_start_per_task,total_gain,unassigned\n";
  for (const MetricsReport& r : rows) {
    std::vector<std::string> missing;
    for (TaskId j : r.unassigned_tasks) missing.push_back(std::to_string(j));
    out << r.label << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << format_number(r.avg_start_time)
        << ',' << format_number(r.mean_start_per_task) << ',' << format_number(r.total_gain) << ','
        << join(missing, ';') << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
  out << "n_tasks,mean_gain_cbpa,std_gain_cbpa,mean_gain_cbba,std_gain_cbba,unconverged\n";
  for (const SweepRow& r : rows)
    out << r.n_tasks << ',' << format_number(r.mean_gain_cbpa) << ',' << format_number(r.std_gain_cbpa) << ','
        << format_number(r.mean_gain_cbba) << ',' << format_number(r.std_gain_cbba) << ',' << r.unconverged << '\n';
}

void write_schedule_svg(std::ostream& out, const AllocationResult& result, const Scenario& scenario)
{
  const Index nt = scenario.num_tasks();
  const double left = 90, top = 30, row = 22, width = 760;
  Scalar horizon = 1.0;
  for (Index j = 0; j < nt; ++j)
    if (std::isfinite(result.start_times(j)))
      horizon = std::max(horizon, result.start_times(j) + scenario.tasks[static_cast<std::size_t>(j)].duration);
  const double scale = (width - left - 20) / horizon;
  svg_open(out, width, top + row * static_cast<double>(nt) + 40);
  out << "<text x=\"" << left << "\" y=\"18\">start time (s)</text>\n";

  const AgentBelief& b = result.consensus();
  for (Index j = 0; j < nt; ++j) {
    const double y = top + row * static_cast<double>(j);
    const Scalar start = result.start_times(j);
    std::vector<std::string> robots;
    Index first = -1;
    for (Index k = 0; k < scenario.num_robots(); ++k) {
      if (!b.winners(j, k)) continue;
      robots.push_back("R" + std::to_string(k + 1));
      if (first < 0) first = k;
    }
    out << "<g class=\"task\" data-task=\"" << j << "\">";
    out << "<text x=\"4\" y=\"" << y + 14 << "\">T" << j + 1 << "</text>";
    if (std::isfinite(start)) {
      const double w = std::max(2.0, scenario.tasks[static_cast<std::size_t>(j)].duration * scale);
      out << "<rect x=\"" << left + start * scale << "\" y=\"" << y + 3 << "\" width=\"" << w
          << "\" height=\"" << row - 6 << "\" fill=\"" << colour(first) << "\"/>";
      out << "<text x=\"" << left + start * scale + w + 4 << "\" y=\"" << y + 14 << "\">" << join(robots, ',')
          << "</text>";
    } else {
      out << "<text x=\"" << left << "\" y=\"" << y + 14 << "\" fill=\"#999\">unassigned</text>";
    }
    out << "</g>\n";
  }
  const double axis = top + row * static_cast<double>(nt) + 8;
  out << "<line x1=\"" << left << "\" y1=\"" << axis << "\" x2=\"" << width - 20 << "\" y2=\"" << axis
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = horizon * tick / 4.0;
    out << "<text x=\"" << left + t * scale << "\" y=\"" << axis + 16 << "\" text-anchor=\"middle\">"
        << format_number(std::round(t)) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_paths_svg(std::ostream& out, const AllocationResult& result, const Scenario& scenario)
{
  Point lo = Point::Constant(kInfinity);
  Point hi = Point::Constant(-kInfinity);
  for (const Robot& r : scenario.robots) {
    lo = lo.cwiseMin(r.position);
    hi = hi.cwiseMax(r.position);
  }
  for (const Task& t : scenario.tasks) {
    lo = lo.cwiseMin(t.position);
    hi = hi.cwiseMax(t.position);
  }
  if (!lo.allFinite()) {
    lo.setZero();
    hi.setOnes();
  }
  const double width = 800, margin = 30;
  const Point span = (hi - lo).cwiseMax(Point::Constant(1.0));
  const double scale = (width - 2 * margin) / std::max(span.x(), span.y());
  const double height = span.y() * scale + 2 * margin;
  auto px = [&](const Point& p) { return margin + (p.x() - lo.x()) * scale; };
  auto py = [&](const Point& p) { return height - margin - (p.y() - lo.y()) * scale; };

  svg_open(out, width, height);
  for (Index k = 0; k < scenario.num_robots(); ++k) {
    const Robot& r = scenario.robots[static_cast<std::size_t>(k)];
    out << "<polyline fill=\"none\" stroke=\"" << colour(k) << "\" stroke-width=\"2\" points=\"" << px(r.position)
        << ',' << py(r.position);
    for (TaskId j : result.paths[static_cast<std::size_t>(k)]) {
      const Point& p = scenario.tasks[static_cast<std::size_t>(j)].position;
      out << ' ' << px(p) << ',' << py(p);
    }
    out << "\"/>\n";
    out << "<rect x=\"" << px(r.position) - 6 << "\" y=\"" << py(r.position) - 6
        << "\" width=\"12\" height=\"12\" fill=\"" << colour(k) << "\"/><text x=\"" << px(r.position) + 8
        << "\" y=\"" << py(r.position) + 4 << "\">R" << k + 1 << "</text>\n";
  }
  for (const Task& t : scenario.tasks) {
    const bool started = std::isfinite(result.start_times(t.id));
    out << "<circle cx=\"" << px(t.position) << "\" cy=\"" << py(t.position) << "\" r=\"6\" fill=\""
        << (started ? "#333" : "white") << "\" stroke=\"#333\"/><text x=\"" << px(t.position) + 8 << "\" y=\""
        << py(t.position) - 6 << "\">T" << t.id + 1 << "</text>\n";
  }
  out << "</svg>\n";
}

void write_gains_svg(std::ostream& out, const std::vector<SweepRow>& rows)
{
  const double width = 640, height = 400, left = 60, right = 20, top = 20, bottom = 50;
  svg_open(out, width, height);
  if (rows.empty()) {
    out << "</svg>\n";
    return;
  }
  Scalar ymax = 1.0;
  for (const SweepRow& r : rows) ymax = std::max({ymax, r.mean_gain_cbpa, r.mean_gain_cbba});
  ymax *= 1.1;
  const int n0 = rows.front().n_tasks;
  const int n1 = std::max(rows.back().n_tasks, n0 + 1);
  auto x = [&](int n) { return left + (width - left - right) * (n - n0) / double(n1 - n0); };
  auto y = [&](Scalar g) { return height - bottom - (height - top - bottom) * g / ymax; };

  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  for (const SweepRow& r : rows)
    out << "<text x=\"" << x(r.n_tasks) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">"
        << r.n_tasks << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const Scalar g = ymax * tick / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << y(g) + 4 << "\" text-anchor=\"end\">"
        << format_number(std::round(g)) << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">number of tasks</text>\n";

  auto series = [&](const char* name, const char* stroke, auto pick, double label_y) {
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i)
      out << (i ? " " : "") << x(rows[i].n_tasks) << ',' << y(pick(rows[i]));
    out << "\"/>\n<text x=\"" << left + 10 << "\" y=\"" << label_y << "\" fill=\"" << stroke << "\">" << name
        << "</text>\n";
  };
  series("CBPA", colour(0), [](const SweepRow& r) { return r.mean_gain_cbpa; }, top + 12);
  series("CBBA", colour(1), [](const SweepRow& r) { return r.mean_gain_cbba; }, top + 28);
  out << "</svg>\n";
}

} // namespace cbpa
