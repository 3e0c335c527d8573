#include "seglab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace seglab {

using nlohmann::json;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_field(const ScalarField& f, const std::string& base, FieldFormat fmt) {
    const Grid2D& g = f.grid;
    json header = {
        {"nx", g.nx},
        {"ny", g.ny},
        {"h", g.h},
        {"origin", {g.origin.x, g.origin.y}},
        {"format", fmt == FieldFormat::Binary ? "bin" : "csv"},
    };
    if (fmt == FieldFormat::Binary) {
        std::ofstream out(base + ".bin", std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + base + ".bin");
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    } else {
        std::ostringstream csv;
        csv << "i,j,value\n";
        csv.precision(17);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                csv << i << ',' << j << ',' << f.at(i, j) << '\n';
        write_text_file(base + ".csv", csv.str());
    }
    write_text_file(base + ".json", header.dump(2) + "\n");
}

ScalarField load_field(const std::string& base) {
    std::string header_path = base;
    std::string stem = base;
    if (base.size() > 5 && base.substr(base.size() - 5) == ".json")
        stem = base.substr(0, base.size() - 5);
    else
        header_path = base + ".json";
    json header = json::parse(read_text_file(header_path));
    Grid2D g(header.at("nx").get<int>(), header.at("ny").get<int>(),
             header.at("h").get<double>(),
             {header.at("origin").at(0).get<double>(), header.at("origin").at(1).get<double>()});
    ScalarField f(g);
    std::string fmt = header.at("format").get<std::string>();
    if (fmt == "bin") {
        std::ifstream in(stem + ".bin", std::ios::binary);
        if (!in) throw IoError("missing payload: " + stem + ".bin");
        in.read(reinterpret_cast<char*>(f.values.data()),
                static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
            throw IoError("truncated payload: " + stem + ".bin");
    } else if (fmt == "csv") {
        std::ifstream in(stem + ".csv");
        if (!in) throw IoError("missing payload: " + stem + ".csv");
        std::string line;
        std::getline(in, line); // header row
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            int i, j;
            char comma;
            double v;
            if (!(ls >> i >> comma >> j >> comma >> v))
                throw IoError("malformed csv row: " + line);
            if (i < 0 || i >= g.nx || j < 0 || j >= g.ny)
                throw IoError("csv index out of range: " + line);
            f.at(i, j) = v;
        }
    } else {
        throw IoError("unknown field format: " + fmt);
    }
    if (!f.all_finite()) throw IoError("field payload contains non-finite values");
    return f;
}

} // namespace seglab
