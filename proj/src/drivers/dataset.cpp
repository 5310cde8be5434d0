#include "assist/drivers/dataset.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

namespace assist::drivers {
namespace {

constexpr std::size_t kFields = 8 + prep::kDistanceSize;

void put(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, res.ptr);
}

template <typename T>
T parse(std::string_view field, std::size_t line_no) {
  T v{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw std::runtime_error("dataset: bad number on line " + std::to_string(line_no));
  return v;
}

}  // namespace

std::size_t Dataset::step_count() const {
  std::size_t n = 0;
  for (const auto& s : sessions) n += s.steps.size();
  return n;
}

prep::ModelInput model_input(const Step& step) {
  return prep::assemble_input(prep::normalize_ci(step.ci), prep::normalize_state(step.speed, step.yaw, step.pitch, step.roll),
                              prep::normalize_distances(step.distances));
}

void write_dataset(std::ostream& out, const Dataset& data) {
  std::string line = "session,tick,steer,pedal,speed,yaw,pitch,roll";
  for (std::size_t i = 0; i < prep::kDistanceSize; ++i) line += ",d" + std::to_string(i);
  out << line << '\n';
  for (const auto& s : data.sessions) {
    for (const auto& st : s.steps) {
      line = std::to_string(s.id) + ',' + std::to_string(st.tick);
      for (double v : {st.ci.steer, st.ci.pedal, st.speed, st.yaw, st.pitch, st.roll}) {
        line += ',';
        put(line, v);
      }
      for (double d : st.distances) {
        line += ',';
        put(line, d);
      }
      out << line << '\n';
    }
  }
  if (!out) throw std::runtime_error("dataset: write failed");
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("session", 0) == 0) continue;
    fields.clear();
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != kFields)
      throw std::runtime_error("dataset: expected " + std::to_string(kFields) + " fields on line " + std::to_string(line_no));
    const auto id = parse<std::uint64_t>(fields[0], line_no);
    Step st;
    st.tick = parse<int>(fields[1], line_no);
    st.ci = {parse<double>(fields[2], line_no), parse<double>(fields[3], line_no)};
    st.speed = parse<double>(fields[4], line_no);
    st.yaw = parse<double>(fields[5], line_no);
    st.pitch = parse<double>(fields[6], line_no);
    st.roll = parse<double>(fields[7], line_no);
    for (std::size_t i = 0; i < prep::kDistanceSize; ++i) st.distances[i] = parse<double>(fields[8 + i], line_no);
    if (data.sessions.empty() || data.sessions.back().id != id) {
      data.sessions.push_back({id, {}});
    } else if (st.tick != data.sessions.back().steps.back().tick + 1) {
      throw std::runtime_error("dataset: non-contiguous tick on line " + std::to_string(line_no));
    }
    data.sessions.back().steps.push_back(st);
  }
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot open " + path.string());
  write_dataset(out, data);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open " + path.string());
  return read_dataset(in);
}

}  // namespace assist::drivers
