// Condense a noisy-free two-class sample, compare against the baselines, and
// classify new points with the weighted rule.

#include <iostream>

#include "wnn/wnn.hpp"

int main() {
    auto train = wnn::gen_circle(400, 1);
    auto test = wnn::gen_circle(2000, 2);

    auto greedy = wnn::greedy_wnn(train);
    std::cout << "greedy_wnn keeps " << greedy.condensed.size() << " of " << train.size() << " points\n";
    for (const auto& pick : greedy.trace.picks) {
        std::cout << "  index " << pick.index << " radius " << pick.radius << " covers " << pick.covered << '\n';
    }
    std::cout << "mss keeps " << wnn::mss(train).size() << ", rss keeps " << wnn::rss(train).size() << '\n';

    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        wrong += wnn::classify(test.point(i), greedy.condensed) != test.label(i);
    }
    std::cout << "test error " << static_cast<double>(wrong) / static_cast<double>(test.size()) << '\n';

    auto code = wnn::encode(train, greedy.condensed);
    std::cout << "compression code: " << code.prototypes.size() << " prototypes, " << code.witnesses.size()
              << " witnesses\n";
    std::cout << "bound at delta 0.05: "
              << wnn::generalization_bound(train.size(), code.prototypes.size(), 0.05, true) << '\n';

    auto net = wnn::NavigatingNet::from(wnn::reconstruct(code));
    auto hit = net.query(wnn::Point{0.2, -0.1}, 0.1);
    std::cout << "nearest weighted prototype to (0.2, -0.1): " << hit.index << " after visiting "
              << hit.nodes_visited << " nodes\n";
}
