#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "rffhsi/io.hpp"
#include "rffhsi/model_io.hpp"
#include "rffhsi/npy.hpp"
#include "support/synthetic.hpp"
#include "support/temp.hpp"

using namespace rffhsi;
using rffhsi::testing::TempDir;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream file(path, std::ios::binary);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("npy header is parsed from raw bytes") {
    const TempDir dir;
    // hand-built v1.0 file: shape (2, 3) float64
    std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (2, 3), }";
    while ((10 + header.size() + 1) % 16 != 0) header += ' ';
    header += '\n';
    std::string bytes;
    bytes += '\x93';
    bytes += "NUMPY";
    bytes += '\x01';
    bytes += '\0';
    bytes += static_cast<char>(header.size() & 0xff);
    bytes += static_cast<char>((header.size() >> 8) & 0xff);
    bytes += header;
    const double values[6] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    bytes.append(reinterpret_cast<const char*>(values), sizeof(values));

    const std::string path = dir.file("hand.npy");
    spit(path, bytes);
    const NpyArray array = load_array(path);
    CHECK(array.shape == std::vector<std::size_t>{2, 3});
    CHECK(array.data[0] == 1.0);
    CHECK(array.data[5] == 6.0);
}

TEST_CASE("npy rejects fortran order, bad magic, and alien descriptors") {
    const TempDir dir;
    const std::string f_order =
        "{'descr': '<f8', 'fortran_order': True, 'shape': (2, 2), }";

    auto write_with_header = [&](const std::string& header_text) {
        std::string header = header_text;
        while ((10 + header.size() + 1) % 16 != 0) header += ' ';
        header += '\n';
        std::string bytes;
        bytes += '\x93';
        bytes += "NUMPY";
        bytes += '\x01';
        bytes += '\0';
        bytes += static_cast<char>(header.size() & 0xff);
        bytes += static_cast<char>((header.size() >> 8) & 0xff);
        bytes += header;
        bytes.append(32, '\0');
        const std::string path = dir.file("bad.npy");
        spit(path, bytes);
        return path;
    };

    CHECK_THROWS_WITH_AS(load_array(write_with_header(f_order)),
                         doctest::Contains("Fortran"), Error);
    CHECK_THROWS_AS(
        load_array(write_with_header("{'descr': '>f8', 'fortran_order': False, 'shape': (2, 2), }")),
        Error);
    CHECK_THROWS_AS(
        load_array(write_with_header("{'descr': '<u4', 'fortran_order': False, 'shape': (2, 2), }")),
        Error);

    const std::string garbage = dir.file("garbage.npy");
    spit(garbage, "not an npy file at all");
    CHECK_THROWS_AS(load_array(garbage), Error);

    CHECK_THROWS_AS(load_array(dir.file("missing.npy")), Error);
}

TEST_CASE("npy accepts every documented element type") {
    const TempDir dir;
    const std::string path = dir.file("typed.npy");

    auto build = [&](const std::string& descr, const std::string& payload) {
        std::string header = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': (2,), }";
        while ((10 + header.size() + 1) % 16 != 0) header += ' ';
        header += '\n';
        std::string bytes;
        bytes += '\x93';
        bytes += "NUMPY";
        bytes += '\x01';
        bytes += '\0';
        bytes += static_cast<char>(header.size() & 0xff);
        bytes += static_cast<char>((header.size() >> 8) & 0xff);
        bytes += header + payload;
        spit(path, bytes);
    };

    const float f32[2] = {1.5f, -2.0f};
    build("<f4", std::string(reinterpret_cast<const char*>(f32), 8));
    CHECK(load_array(path).data == std::vector<double>{1.5, -2.0});

    const std::int8_t i8[2] = {-3, 7};
    build("|i1", std::string(reinterpret_cast<const char*>(i8), 2));
    CHECK(load_array(path).data == std::vector<double>{-3.0, 7.0});

    const std::int16_t i16[2] = {-300, 700};
    build("<i2", std::string(reinterpret_cast<const char*>(i16), 4));
    CHECK(load_array(path).data == std::vector<double>{-300.0, 700.0});

    const std::int32_t i32[2] = {-70000, 1 << 20};
    build("<i4", std::string(reinterpret_cast<const char*>(i32), 8));
    CHECK(load_array(path).data == std::vector<double>{-70000.0, 1048576.0});
}

TEST_CASE("npy round trip of a Salinas-sized matrix is bit-identical") {
    const TempDir dir;
    const std::string path = dir.file("big.npy");
    const Matrix m = testing::gaussian_matrix(204, 111104, 12345);
    save_matrix(path, m);
    const Matrix back = load_matrix(path);
    REQUIRE(back.rows() == 204);
    REQUIRE(back.cols() == 111104);
    CHECK(std::memcmp(m.data(), back.data(), sizeof(double) * static_cast<std::size_t>(m.size())) ==
          0);
}

TEST_CASE("numpy itself can read what save_array writes") {
    // header layout check without numpy: reload and compare a 1-D save
    const TempDir dir;
    const std::string path = dir.file("vec.npy");
    save_array(path, {4}, {1.0, 2.0, 3.0, 4.0});
    const NpyArray array = load_array(path);
    CHECK(array.shape == std::vector<std::size_t>{4});
    CHECK(array.data == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    // v1.0 header is 16-byte aligned with a trailing newline
    const std::string bytes = slurp(path);
    const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                   (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    CHECK((10 + header_len) % 16 == 0);
    CHECK(bytes[10 + header_len - 1] == '\n');
}

TEST_CASE("labels csv parses grids and reports bad rows") {
    const TempDir dir;
    const std::string path = dir.file("labels.csv");

    SUBCASE("well-formed grid") {
        spit(path, "0,1\n2,0\n");
        const LabelGrid grid = load_labels_csv(path);
        CHECK(grid.rows == 2);
        CHECK(grid.cols == 2);
        CHECK(grid.values == std::vector<int>{0, 1, 2, 0});
    }

    SUBCASE("crlf and no trailing newline are tolerated") {
        spit(path, "1,2\r\n3,4");
        const LabelGrid grid = load_labels_csv(path);
        CHECK(grid.values == std::vector<int>{1, 2, 3, 4});
    }

    SUBCASE("ragged rows name the offender") {
        spit(path, "1,2\n3\n");
        CHECK_THROWS_WITH_AS(load_labels_csv(path), doctest::Contains("row 2"), Error);
    }

    SUBCASE("non-integer cells are rejected") {
        spit(path, "1,x\n");
        CHECK_THROWS_AS(load_labels_csv(path), Error);
        spit(path, "1,-2\n");
        CHECK_THROWS_AS(load_labels_csv(path), Error);
    }
}

TEST_CASE("load_cube ties arrays and label grids together") {
    const TempDir dir;
    const std::string data_path = dir.file("cube.npy");
    const std::string labels_path = dir.file("labels.csv");

    // 2x3 pixels, 4 bands
    std::vector<double> values(2 * 3 * 4);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
    save_array(data_path, {2, 3, 4}, values);
    spit(labels_path, "0,1,2\n2,1,0\n");

    const HsiCube cube = load_cube(data_path, labels_path);
    CHECK(cube.rows == 2);
    CHECK(cube.cols == 3);
    CHECK(cube.bands == 4);
    CHECK(cube.labels == std::vector<int>{0, 1, 2, 2, 1, 0});

    SUBCASE("mismatched label grid is rejected") {
        spit(labels_path, "0,1\n2,2\n");
        CHECK_THROWS_AS(load_cube(data_path, labels_path), Error);
    }

    SUBCASE("a 2-d matrix becomes a single-row cube") {
        save_array(data_path, {4, 6}, std::vector<double>(24, 1.0));
        const HsiCube flat = load_cube(data_path);
        CHECK(flat.rows == 1);
        CHECK(flat.cols == 6);
        CHECK(flat.bands == 4);
    }
}

TEST_CASE("ppm images carry the P6 header and payload") {
    const TempDir dir;
    const std::string path = dir.file("map.ppm");
    Image image;
    image.width = 2;
    image.height = 1;
    image.rgb = {255, 0, 0, 0, 255, 0};
    save_ppm(path, image);
    const std::string bytes = slurp(path);
    CHECK(bytes.rfind("P6\n2 1\n255\n", 0) == 0);
    CHECK(bytes.size() == 11 + 6);
    CHECK(static_cast<unsigned char>(bytes[11]) == 255);
}

TEST_CASE("model container round trips bit-exactly and detects corruption") {
    const TempDir dir;
    const std::string path = dir.file("model.bin");

    ModelContainer container;
    container.method = "demo";
    container.metadata_json = R"({"alpha":1.5,"kind":"demo"})";
    container.sections.push_back(matrix_section("weights", testing::gaussian_matrix(7, 5, 3)));
    container.sections.push_back(vector_section("offsets", Vector::LinSpaced(4, 0.0, 1.0)));
    ArraySection indices;
    indices.name = "indices";
    indices.dtype = ArraySection::DType::i64;
    indices.shape = {3};
    indices.i64 = {5, -1, 99};
    container.sections.push_back(indices);

    save_container(path, container);
    const ModelContainer loaded = load_container(path);
    CHECK(loaded.method == "demo");
    CHECK(loaded.metadata_json == container.metadata_json);
    REQUIRE(loaded.sections.size() == 3);
    CHECK(loaded.section("weights").f64 == container.section("weights").f64);
    CHECK(loaded.section("indices").i64 == container.section("indices").i64);

    // second save writes identical bytes
    const std::string path2 = dir.file("model2.bin");
    save_container(path2, loaded);
    CHECK(slurp(path) == slurp(path2));

    SUBCASE("flipping one payload byte breaks the checksum") {
        std::string bytes = slurp(path);
        bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x40);
        spit(path, bytes);
        CHECK_THROWS_WITH_AS(load_container(path), doctest::Contains("checksum"), Error);
    }

    SUBCASE("missing sections are reported by name") {
        CHECK_THROWS_WITH_AS(container.section("nope"), doctest::Contains("nope"), Error);
    }
}

TEST_CASE("crc32 matches the standard test vector") {
    const unsigned char check[] = {'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    CHECK(crc32(check, 9) == 0xcbf43926u);
}

TEST_CASE("atomic writes leave no temp file behind") {
    const TempDir dir;
    const std::string path = dir.file("out.txt");
    write_file_atomic(path, "payload");
    CHECK(slurp(path) == "payload");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}
