#include "xenomon/cameo.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "xenomon/error.hpp"

namespace xenomon::cameo {

// Defined in the generated cameo_data.cpp.
extern const std::string_view kEventCodesTsv;
extern const std::string_view kCountriesTsv;
extern const std::string_view kActorTypesTsv;

namespace {

// Calls `row(cells, line_no)` for every non-blank, non-comment line.
template <class RowFn>
void for_each_row(std::string_view text, std::string_view table, RowFn row) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (auto tab = line.find('\t'); tab != std::string_view::npos; tab = line.find('\t', start)) {
      cells.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    cells.push_back(line.substr(start));
    if (cells.front().empty()) {
      throw FormatError(std::string(table) + " line " + std::to_string(line_no) + ": empty code");
    }
    row(cells, line_no);
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <class Map>
auto lookup(const Map& m, std::string_view key) -> std::optional<std::string_view> {
  const auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return std::string_view{it->second};
}

}  // namespace

CameoTables CameoTables::from_text(std::string_view event_codes, std::string_view countries,
                                   std::string_view actor_types) {
  CameoTables t;
  auto two_columns = [](std::map<std::string, std::string, std::less<>>& into, std::string_view table) {
    return [&into, table](const std::vector<std::string_view>& cells, std::size_t line_no) {
      if (cells.size() != 2) {
        throw FormatError(std::string(table) + " line " + std::to_string(line_no) + ": expected 2 columns");
      }
      into.insert_or_assign(std::string(cells[0]), std::string(cells[1]));
    };
  };
  for_each_row(event_codes, "eventcodes", two_columns(t.events_, "eventcodes"));
  for_each_row(actor_types, "actortypes", two_columns(t.actor_types_, "actortypes"));
  for_each_row(countries, "countries", [&t](const std::vector<std::string_view>& cells, std::size_t line_no) {
    if (cells.size() != 4) {
      throw FormatError("countries line " + std::to_string(line_no) + ": expected 4 columns");
    }
    t.countries_.insert_or_assign(std::string(cells[0]),
                                  CountryInfo{std::string(cells[1]), std::string(cells[2]), std::string(cells[3])});
  });
  if (t.events_.empty() || t.countries_.empty() || t.actor_types_.empty()) {
    throw FormatError("CAMEO tables must not be empty");
  }
  return t;
}

const CameoTables& CameoTables::builtin() {
  static const CameoTables tables = from_text(kEventCodesTsv, kCountriesTsv, kActorTypesTsv);
  return tables;
}

CameoTables CameoTables::load(const std::filesystem::path& dir) {
  return from_text(read_file(dir / "eventcodes.tsv"), read_file(dir / "countries.tsv"),
                   read_file(dir / "actortypes.tsv"));
}

std::optional<std::string_view> CameoTables::describe_event(std::string_view code) const {
  return lookup(events_, code);
}

std::optional<std::string_view> CameoTables::describe_event_root(std::string_view root_code) const {
  if (root_code.size() != 2) return std::nullopt;
  return lookup(events_, root_code);
}

std::optional<std::string_view> CameoTables::country_name(std::string_view code) const {
  const auto* info = country(code);
  if (!info) return std::nullopt;
  return std::string_view{info->name};
}

const CountryInfo* CameoTables::country(std::string_view code) const {
  const auto it = countries_.find(code);
  return it == countries_.end() ? nullptr : &it->second;
}

std::optional<std::string_view> CameoTables::actor_type(std::string_view code) const {
  return lookup(actor_types_, code);
}

std::vector<std::pair<std::string, std::string>> CameoTables::event_roots() const {
  std::vector<std::pair<std::string, std::string>> roots;
  for (const auto& [code, description] : events_) {
    if (code.size() == 2) roots.emplace_back(code, description);
  }
  return roots;
}

std::string_view to_string(RefugeeMode mode) {
  return mode == RefugeeMode::exact ? "exact" : "contains-type";
}

std::optional<RefugeeMode> refugee_mode_from_string(std::string_view text) {
  if (text == "exact") return RefugeeMode::exact;
  if (text == "contains-type") return RefugeeMode::contains_type;
  return std::nullopt;
}

bool is_refugee_actor(const std::optional<ActorRef>& actor, RefugeeMode mode) {
  if (!actor) return false;
  if (actor->code == kRefugeeCode) return true;
  if (mode == RefugeeMode::exact) return false;
  return std::any_of(actor->type_codes.begin(), actor->type_codes.end(),
                     [](const std::string& t) { return t == kRefugeeCode; });
}

}  // namespace xenomon::cameo
