"""Depth-pair shape codec.

Encodes a mesh into a registered pair of depth maps (nearest and farthest
surface crossing per pixel ray), decodes the pair back into an oriented
point cloud, and provides the voxel baseline plus the metrics used to
compare the two representations.
"""

from ._core import (
    Camera,
    Mesh,
    MouldPair,
    VoxelGrid,
    chamfer,
    combined_objective,
    decode,
    depth_accuracy,
    encode,
    foreground_mask,
    frame_square,
    gan_loss,
    l1_gradient,
    l1_loss,
    load_mesh,
    load_point_cloud,
    make_box,
    make_capsule,
    make_humanoid,
    make_uv_sphere,
    matched_voxel_resolution,
    read_mould,
    run_sweep,
    sample_surface,
    save_mesh,
    save_point_cloud,
    standard_camera,
    subject_placement,
    validate,
    voxelize_surface,
    write_mould,
)

__all__ = [
    "Camera",
    "Mesh",
    "MouldPair",
    "VoxelGrid",
    "chamfer",
    "combined_objective",
    "decode",
    "depth_accuracy",
    "encode",
    "foreground_mask",
    "frame_square",
    "gan_loss",
    "l1_gradient",
    "l1_loss",
    "load_mesh",
    "load_point_cloud",
    "make_box",
    "make_capsule",
    "make_humanoid",
    "make_uv_sphere",
    "matched_voxel_resolution",
    "read_mould",
    "run_sweep",
    "sample_surface",
    "save_mesh",
    "save_point_cloud",
    "standard_camera",
    "subject_placement",
    "validate",
    "voxelize_surface",
    "write_mould",
]

__version__ = "0.1.0"
