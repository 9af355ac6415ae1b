#include "bgap/predictions.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace bgap {

using nlohmann::json;

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
  for (const Prediction& p : predictions) {
    json obj;
    obj["id"] = p.id;
    obj["tree"] = to_unlabeled(p.tree, p.tokens);
    out << obj.dump() << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      Prediction p;
      p.id = obj.at("id").get<std::string>();
      p.tree = parse_unlabeled(obj.at("tree").get<std::string>(), p.tokens);
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad prediction line: ") + e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<Prediction> read_predictions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open predictions '" + path.string() + "'");
  try {
    return read_predictions(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

}  // namespace bgap
