"""Smoke tests for the mvos_hsi Python extension.

Exercises the bound surface end to end on a small synthetic dataset; the
numerical depth lives in the C++ suites.
"""

import os
import subprocess

import numpy as np
import pytest

import mvos_hsi


@pytest.fixture
def dataset(tmp_path):
    """Synthetic folder: Dark_R + one sample with two bright blobs."""
    rng = np.random.default_rng(7)
    lines, samples, bands = 48, 48, 8
    wavelengths = np.linspace(500.0, 800.0, bands)

    dark = np.full((lines, samples, bands), 100.0)
    mvos_hsi.write_cube(dark, str(tmp_path / "Dark_R"), interleave="bil",
                        data_type="float32", wavelengths=list(wavelengths))

    sample = np.full((lines, samples, bands), 150.0)
    for r0, c0 in [(6, 6), (28, 28)]:
        for b, wl in enumerate(wavelengths):
            if wl >= 740:
                level = 900.0
            elif 650 <= wl < 700:
                level = 120.0
            else:
                level = 300.0
            sample[r0:r0 + 12, c0:c0 + 12, b] = level
    mvos_hsi.write_cube(sample, str(tmp_path / "Plant_R"), interleave="bip",
                        data_type="float32", wavelengths=list(wavelengths))

    mvos_hsi.write_mat(str(tmp_path / "wavelengths.mat"),
                       {"wavelength": wavelengths})
    return tmp_path


def test_cube_round_trip(tmp_path):
    cube = np.random.default_rng(0).uniform(0, 1000, size=(5, 4, 3))
    mvos_hsi.write_cube(cube, str(tmp_path / "c"), interleave="bsq")
    back, wl = mvos_hsi.read_cube(str(tmp_path / "c.hdr"))
    assert wl is None
    np.testing.assert_array_equal(back, cube)


def test_mat_round_trip(tmp_path):
    arr = np.arange(24, dtype=float).reshape(2, 3, 4)
    mvos_hsi.write_mat(str(tmp_path / "a.mat"), {"cube": arr})
    back = mvos_hsi.read_mat(str(tmp_path / "a.mat"), "cube")
    np.testing.assert_array_equal(back, arr)


def test_load_wavelengths(tmp_path):
    (tmp_path / "wl.csv").write_text("wavelength\n500\n600\n700\n")
    assert mvos_hsi.load_wavelengths(str(tmp_path / "wl.csv")) == [500, 600, 700]


def test_compute_index():
    cube = np.zeros((2, 2, 4))
    cube[..., 0] = 0.2  # red
    cube[..., 3] = 0.8  # nir
    values, valid = mvos_hsi.compute_index(cube, "ndvi", bands=(0, 1, 2, 3))
    assert valid.all()
    np.testing.assert_allclose(values, 0.6, atol=1e-12)


def test_cube_math():
    raw = np.full((2, 2, 2), 55.0)
    dark = np.full((2, 2, 2), 10.0)
    white = np.full((2, 2, 2), 100.0)
    np.testing.assert_array_equal(mvos_hsi.subtract_dark(raw, dark), 45.0)
    refl, invalid = mvos_hsi.reflectance(raw, dark, white)
    assert invalid == 0
    np.testing.assert_allclose(refl, 0.5, atol=1e-12)

    ramp = np.arange(6, dtype=float).reshape(1, 1, 6)
    np.testing.assert_array_equal(mvos_hsi.spectral_bin(ramp, 3),
                                  np.array([[[1.0, 4.0]]]))
    block = np.arange(4, dtype=float).reshape(2, 2, 1)
    np.testing.assert_array_equal(mvos_hsi.spatial_bin(block, 2),
                                  np.array([[[1.5]]]))


def test_full_pipeline(dataset):
    report = mvos_hsi.calibrate_folder(folder=str(dataset),
                                       dark_base=str(dataset / "Dark"),
                                       spectral_bin=2, spatial_bin=2)
    assert report["ok"]
    assert (dataset / "Plant_R.mat").exists()
    cube = mvos_hsi.read_mat(str(dataset / "Plant_R.mat"), "cube")
    assert cube.shape == (24, 24, 4)

    clip = mvos_hsi.clip_folder(folder=str(dataset), index="ndvi",
                                wavelengths_mat=str(dataset / "wavelengths.mat"),
                                threshold_mode="auto", min_area=100,
                                crop_mode="square", crop_size=20)
    assert clip["ok"]
    clipped = dataset / "clipped_hypercubes"
    plant = [e for e in clip["inputs"] if "Plant_R" in e["path"]]
    assert plant[0]["leaf_count"] == 2
    assert (clipped / "Plant_R_leaf_1.hdr").exists()

    aug = mvos_hsi.augment_folder(folder=str(clipped), num_aug=3, flip=True,
                                  rotate=(-10, 10), shear=(-16, 16), seed=11)
    assert aug["ok"]
    assert (clipped / "Plant_R_leaf_1_aug3.img").exists()

    plot = mvos_hsi.plot_leaf_center(clipped_dir=str(clipped), stem="Plant_R",
                                     leaves=[1, 2],
                                     wavelengths_mat=str(dataset / "wavelengths.mat"),
                                     title="Center pixel spectra", show=True)
    assert os.path.exists(plot["chart"])
    assert os.path.exists(plot["csv"])

    multi = mvos_hsi.plot_leaf_multi(clipped_dir=str(clipped),
                                     items=[("Plant_R", 1), ("Plant_R", 2)])
    assert os.path.exists(multi["chart"])


def test_errors_surface_as_exceptions(tmp_path):
    with pytest.raises(RuntimeError):
        mvos_hsi.read_cube(str(tmp_path / "missing.hdr"))
    with pytest.raises(RuntimeError):
        mvos_hsi.clip_folder(folder=str(tmp_path), index="ndvi")


def test_cli_binary_available():
    cli = os.environ.get("MVOS_HSI_CLI")
    if not cli:
        pytest.skip("MVOS_HSI_CLI not set")
    out = subprocess.run([cli, "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "calibration" in out.stdout
