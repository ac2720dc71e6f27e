"""Pretrained image CNN wrapper producing penultimate-layer features.

The backbone is GoogLeNet; frames are embedded with the 1024-wide global
average pool that feeds its classifier. When the pretrained ImageNet
weights cannot be fetched (offline environments), the same architecture is
instantiated with a deterministic random init so pipelines remain runnable;
the feature width is a property of the architecture either way. The chosen
weight source is recorded so downstream users can tell the difference.
"""

from __future__ import annotations

import warnings

import cv2
import numpy as np
import torch
from torchvision.models import googlenet

IMAGENET_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
IMAGENET_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


class FeatureBackbone:
    """GoogLeNet penultimate-layer embedder for BGR uint8 frames."""

    def __init__(self, weights="pretrained", seed=0, device="cpu"):
        self.device = torch.device(device)
        self.weight_source = weights
        if weights == "pretrained":
            try:
                from torchvision.models import GoogLeNet_Weights

                model = googlenet(weights=GoogLeNet_Weights.IMAGENET1K_V1)
            except Exception as exc:  # download blocked or cache missing
                warnings.warn(
                    f"pretrained GoogLeNet weights unavailable ({exc}); "
                    "falling back to a deterministic random init. Features "
                    "keep the penultimate-layer width but are not ImageNet "
                    "features.", RuntimeWarning)
                self.weight_source = "random"
                model = self._random_model(seed)
        elif weights == "random":
            model = self._random_model(seed)
        else:
            raise ValueError(f"unknown weights option {weights!r}")
        model.fc = torch.nn.Identity()  # expose the 1024-d pooled features
        model.aux_logits = False
        model.eval()
        self.model = model.to(self.device)
        with torch.no_grad():
            probe = torch.zeros(1, 3, 224, 224, device=self.device)
            self.width = int(self.model(probe).shape[1])

    @staticmethod
    def _random_model(seed):
        torch.manual_seed(seed)
        return googlenet(weights=None, init_weights=True, aux_logits=False)

    @staticmethod
    def _preprocess(frame_bgr):
        # shorter side to 256, center crop 224, ImageNet normalization
        h, w = frame_bgr.shape[:2]
        scale = 256.0 / min(h, w)
        resized = cv2.resize(frame_bgr, (round(w * scale), round(h * scale)),
                             interpolation=cv2.INTER_LINEAR)
        rh, rw = resized.shape[:2]
        top = (rh - 224) // 2
        left = (rw - 224) // 2
        crop = resized[top:top + 224, left:left + 224]
        rgb = cv2.cvtColor(crop, cv2.COLOR_BGR2RGB).astype(np.float32) / 255.0
        rgb = (rgb - IMAGENET_MEAN) / IMAGENET_STD
        return rgb.transpose(2, 0, 1)

    def extract(self, frames, batch_size=16):
        """Embed a list of BGR uint8 frames; returns (n, width) float32."""
        if not frames:
            return np.zeros((0, self.width), dtype=np.float32)
        out = []
        with torch.no_grad():
            for start in range(0, len(frames), batch_size):
                batch = np.stack([self._preprocess(f)
                                  for f in frames[start:start + batch_size]])
                tensor = torch.from_numpy(batch).to(self.device)
                out.append(self.model(tensor).cpu().numpy())
        return np.concatenate(out, axis=0).astype(np.float32)
