#include <iostream>

#include "qss/cli.hpp"
#include "qss/error.hpp"

int main(int argc, char** argv) {
    try {
        const auto config = qss::parse_command_line(argc, argv);
        if (!config) {
            return 0;
        }
        return qss::run_and_write(*config);
    } catch (const qss::Error& e) {
        std::cerr << e.what() << "\n";
        return qss::exit_code(e.code());
    }
}
