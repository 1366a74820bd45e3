"""Leaf-level hyperspectral preprocessing.

End-to-end workflow over folder-structured ENVI datasets: dark calibration
with spectral/spatial binning, vegetation-index leaf clipping, geometric
augmentation, and spectral diagnostics. The heavy lifting lives in the
compiled `_core` extension; this package re-exports its public surface.

Typical use::

    import mvos_hsi

    mvos_hsi.calibrate_folder(folder=root, dark_base=root + "/Dark",
                              spectral_bin=3, spatial_bin=3)
    mvos_hsi.clip_folder(folder=root, index="ndvi",
                         wavelengths_mat=wavelengths_mat,
                         threshold_mode="auto", min_area=100,
                         crop_mode="square", crop_size=30)
    mvos_hsi.augment_folder(folder=clips_outdir, num_aug=3, flip=True,
                            rotate=(-10, 10), shear=(-16, 16))
    mvos_hsi.plot_leaf_center(clipped_dir=clips_outdir, stem="H_P1_V4_B",
                              leaves=[1, 2], wavelengths_mat=wavelengths_mat)
"""

from ._core import (
    __version__,
    augment_folder,
    calibrate_folder,
    clip_folder,
    compute_index,
    load_wavelengths,
    plot_leaf_center,
    plot_leaf_multi,
    plot_pixel,
    read_cube,
    read_mat,
    reflectance,
    spatial_bin,
    spectral_bin,
    subtract_dark,
    write_cube,
    write_mat,
)

__all__ = [
    "__version__",
    "augment_folder",
    "calibrate_folder",
    "clip_folder",
    "compute_index",
    "load_wavelengths",
    "plot_leaf_center",
    "plot_leaf_multi",
    "plot_pixel",
    "read_cube",
    "read_mat",
    "reflectance",
    "spatial_bin",
    "spectral_bin",
    "subtract_dark",
    "write_cube",
    "write_mat",
]
