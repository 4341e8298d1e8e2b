#include "rffhsi/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rffhsi/npy.hpp"

namespace rffhsi {

LabelGrid load_labels_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw_io("cannot open '" + path + "' for reading");

    LabelGrid grid;
    std::string line;
    int row_number = 0;
    while (std::getline(file, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && file.peek() == std::char_traits<char>::eof()) break;

        std::vector<int> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string cell = line.substr(pos, comma - pos);
            try {
                std::size_t used = 0;
                const int value = std::stoi(cell, &used);
                while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                if (value < 0) throw std::invalid_argument(cell);
                row.push_back(value);
            } catch (const std::exception&) {
                throw_format("'" + path + "' row " + std::to_string(row_number) +
                             ": cell '" + cell + "' is not a non-negative integer");
            }
            pos = comma + 1;
            if (comma == line.size()) break;
        }

        if (grid.cols == 0) grid.cols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != grid.cols)
            throw_format("'" + path + "' row " + std::to_string(row_number) + " has " +
                         std::to_string(row.size()) + " cells, expected " +
                         std::to_string(grid.cols));
        grid.values.insert(grid.values.end(), row.begin(), row.end());
        ++grid.rows;
    }
    if (grid.rows == 0) throw_format("'" + path + "' is empty");
    return grid;
}

HsiCube load_cube(const std::string& data_path, const std::string& labels_path) {
    const NpyArray array = load_array(data_path);
    HsiCube cube;
    if (array.ndim() == 3) {
        cube.rows = static_cast<int>(array.shape[0]);
        cube.cols = static_cast<int>(array.shape[1]);
        cube.bands = static_cast<int>(array.shape[2]);
        cube.values = array.data;
    } else if (array.ndim() == 2) {
        // (bands, N) matrix treated as a single-row image.
        cube.rows = 1;
        cube.cols = static_cast<int>(array.shape[1]);
        cube.bands = static_cast<int>(array.shape[0]);
        cube.values.resize(array.data.size());
        for (std::size_t b = 0; b < array.shape[0]; ++b)
            for (std::size_t j = 0; j < array.shape[1]; ++j)
                cube.values[j * array.shape[0] + b] = array.data[b * array.shape[1] + j];
    } else {
        throw_dimension("'" + data_path + "' holds a " + std::to_string(array.ndim()) +
                        "-d array; expected (rows, cols, bands) or (bands, N)");
    }

    if (!labels_path.empty()) {
        const LabelGrid grid = load_labels_csv(labels_path);
        if (grid.rows != cube.rows || grid.cols != cube.cols)
            throw_dimension("label grid " + std::to_string(grid.rows) + "x" +
                            std::to_string(grid.cols) + " does not match cube " +
                            std::to_string(cube.rows) + "x" + std::to_string(cube.cols));
        cube.labels = grid.values;
    }
    cube.validate();
    return cube;
}

void save_ppm(const std::string& path, const Image& image) {
    if (image.rgb.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        throw_dimension("image buffer size does not match its dimensions");
    std::string contents =
        "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    contents.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
    write_file_atomic(path, contents);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("cannot open '" + temp + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw_io("failed writing '" + temp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) throw_io("cannot rename '" + temp + "' to '" + path + "': " + ec.message());
}

}  // namespace rffhsi
