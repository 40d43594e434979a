"""Ball Mapper graphs built on exact range queries."""

from ._core import (
    BallMapperError,
    BallTree,
    Backend,
    Cover,
    PointCloud,
    aggregate_colors,
    algebraic_range,
    build_k_skeleton,
    build_mapper_graph,
    check_color_bounds,
    cover_from_landmarks,
    distance,
    estimate_lipschitz_constant,
    fit_power_law,
    fps_eps_net,
    generate_uniform_cloud,
    graph_json,
    greedy_eps_net,
    linear_scan_range,
    load_points_csv,
    make_backend,
    validate_eps_net,
    write_points_csv,
)

__version__ = "0.1.0"
