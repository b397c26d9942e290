#include "dentvis/app/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dentvis/app/csv.hpp"
#include "dentvis/core/error.hpp"

namespace dentvis::app {

std::string_view task_name(Task t) noexcept { return t == Task::Tooth ? "tooth" : "sex"; }

Task parse_task(std::string_view name) {
  if (name == "tooth") return Task::Tooth;
  if (name == "sex") return Task::Sex;
  fail(Errc::ConfigError, "unknown task '" + std::string(name) + "'");
}

std::string class_label(Task t, std::uint32_t class_index) {
  if (t == Task::Tooth) return FdiLabel::from_class(class_index).text();
  return class_index == 0 ? "M" : "F";
}

std::filesystem::path Manifest::resolve(const SampleRecord& r) const {
  const std::filesystem::path p(r.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<SampleRecord> Manifest::with_split(Split s) const {
  std::vector<SampleRecord> out;
  for (const auto& r : records)
    if (r.split == s) out.push_back(r);
  return out;
}

Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir) {
  const auto rows = parse_csv(csv);
  require(!rows.empty(), Errc::EmptyManifest, "manifest has no header");
  require(rows[0] == CsvRow{"path", "label", "patient_id", "split"}, Errc::ConfigError,
          "manifest header must be path,label,patient_id,split");
  Manifest m;
  m.base_dir = base_dir;
  std::set<std::string> paths;
  bool have_task = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "manifest row " + std::to_string(i + 1);
    require(row.size() == 4, Errc::ConfigError, where + ": expected 4 fields");
    require(!row[0].empty(), Errc::ConfigError, where + ": empty path");
    require(paths.insert(row[0]).second, Errc::ConfigError, where + ": duplicate path " + row[0]);
    SampleRecord r;
    r.path = row[0];
    const bool is_sex = row[1] == "M" || row[1] == "F" || row[1] == "m" || row[1] == "f";
    const Task task = is_sex ? Task::Sex : Task::Tooth;
    if (!have_task) {
      m.task = task;
      have_task = true;
    }
    require(task == m.task, Errc::TaskMismatch, where + ": label '" + row[1] + "' mixes tooth and sex tasks");
    if (is_sex)
      r.label = parse_sex(row[1]);
    else
      r.label = parse_fdi(row[1]);
    r.patient_id = row[2];
    r.split = parse_split(row[3]);
    m.records.push_back(std::move(r));
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string format_manifest(const Manifest& m) {
  std::ostringstream out;
  write_csv_row(out, {"path", "label", "patient_id", "split"});
  for (const auto& r : m.records) {
    std::string label = std::holds_alternative<FdiLabel>(r.label) ? std::get<FdiLabel>(r.label).text()
                                                                 : std::string(sex_text(std::get<Sex>(r.label)));
    write_csv_row(out, {r.path, label, r.patient_id, std::string(split_text(r.split))});
  }
  return out.str();
}

}  // namespace dentvis::app
