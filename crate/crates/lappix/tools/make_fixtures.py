"""Write the natural-image test fixtures used by the lappix crate tests."""
import pathlib
import numpy as np
from skimage import data

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests/fixtures"


def ycbcr(rgb):
    r, g, b = (rgb[..., i].astype(np.int64) for i in range(3))
    y = (19595 * r + 38470 * g + 7471 * b + 32768) >> 16
    cb = ((-11059 * r - 21709 * g + 32768 * b + 32768) >> 16) + 128
    cr = ((32768 * r - 27439 * g - 5329 * b + 32768) >> 16) + 128
    return [np.clip(p, 0, 255).astype(np.uint8) for p in (y, cb, cr)]


def down2(p):
    h, w = p.shape
    q = np.pad(p.astype(np.int64), ((0, h % 2), (0, w % 2)), mode="edge")
    s = q[0::2, 0::2] + q[1::2, 0::2] + q[0::2, 1::2] + q[1::2, 1::2]
    return ((s + 2) >> 2).astype(np.uint8)


def y4m(path, planes, tag):
    h, w = planes[0].shape
    with open(path, "wb") as f:
        f.write(f"YUV4MPEG2 W{w} H{h} F25:1 Ip A1:1 C{tag}\nFRAME\n".encode())
        for p in planes:
            f.write(np.ascontiguousarray(p).tobytes())


def pnm(path, arr, magic):
    h, w = arr.shape[:2]
    with open(path, "wb") as f:
        f.write(f"{magic}\n{w} {h}\n255\n".encode())
        f.write(np.ascontiguousarray(arr).tobytes())


OUT.mkdir(parents=True, exist_ok=True)
pnm(OUT / "camera.pgm", data.camera()[180:277, 200:315], "P5")
pnm(OUT / "astronaut.ppm", data.astronaut()[30:119, 150:253], "P6")
y, cb, cr = ycbcr(data.coffee()[100:201, 200:327])
y4m(OUT / "coffee.y4m", [y, down2(cb), down2(cr)], "420jpeg")
y4m(OUT / "chelsea.y4m", ycbcr(data.chelsea()[40:133, 120:231]), "444")
y, cb, cr = ycbcr(data.rocket()[150:255, 250:369])
y4m(OUT / "rocket.y4m", [y, down2(cb), down2(cr)], "420jpeg")
