use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Unet,
    Deeplabv3,
}

impl Model {
    pub fn base_lr(self) -> f64 {
        match self {
            Model::Unet => 1e-4,
            Model::Deeplabv3 => 5e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageData {
    RealOnly,
    /// Batches of six real and one synthetic image.
    Mixed {
        real_per_batch: usize,
        synth_per_batch: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub iterations: u64,
    pub base_lr: f64,
    /// Iteration at which the learning rate is divided by `drop_factor`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr_drop_iteration: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drop_factor: Option<f64>,
    pub batch_size: usize,
    pub data: StageData,
}

impl Stage {
    /// Learning rate in effect at `iteration` (0-based).
    pub fn lr_at(&self, iteration: u64) -> f64 {
        match (self.lr_drop_iteration, self.drop_factor) {
            (Some(at), Some(f)) if iteration >= at => self.base_lr / f,
            _ => self.base_lr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSchedule {
    pub model: Model,
    pub stages: Vec<Stage>,
}

pub const STAGE1_ITERATIONS: u64 = 80_000;
pub const LR_DROP_ITERATION: u64 = 50_000;
pub const LR_DROP_FACTOR: f64 = 10.0;
pub const FINETUNE_ITERATIONS: u64 = 50_000;
pub const FINETUNE_LR: f64 = 2e-5;

/// Two-stage protocol when synthetic data is used (mixed training, then a
/// real-only fine-tune), a single real-only stage otherwise.
pub fn training_schedule(model: Model, with_synthetic: bool) -> TrainingSchedule {
    let data =
        if with_synthetic { StageData::Mixed { real_per_batch: 6, synth_per_batch: 1 } } else { StageData::RealOnly };
    let mut stages = vec![Stage {
        iterations: STAGE1_ITERATIONS,
        base_lr: model.base_lr(),
        lr_drop_iteration: Some(LR_DROP_ITERATION),
        drop_factor: Some(LR_DROP_FACTOR),
        batch_size: 7,
        data,
    }];
    if with_synthetic {
        stages.push(Stage {
            iterations: FINETUNE_ITERATIONS,
            base_lr: FINETUNE_LR,
            lr_drop_iteration: None,
            drop_factor: None,
            batch_size: 7,
            data: StageData::RealOnly,
        });
    }
    TrainingSchedule { model, stages }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deeplab_real_only() {
        let s = training_schedule(Model::Deeplabv3, false);
        assert_eq!(s.stages.len(), 1);
        assert_eq!(s.stages[0].base_lr, 5e-5);
        assert_eq!(s.stages[0].data, StageData::RealOnly);
    }

    #[test]
    fn unet_with_finetune() {
        let s = training_schedule(Model::Unet, true);
        assert_eq!(s.stages.len(), 2);
        assert_eq!(s.stages[0].base_lr, 1e-4);
        assert_eq!(s.stages[1].iterations, 50_000);
        assert_eq!(s.stages[1].base_lr, 2e-5);
        assert_eq!(s.stages[1].data, StageData::RealOnly);
    }

    #[test]
    fn drop_before_end() {
        for m in [Model::Unet, Model::Deeplabv3] {
            let st = training_schedule(m, true).stages[0];
            assert!(st.lr_drop_iteration.unwrap() < st.iterations);
            assert_eq!(st.lr_at(49_999), m.base_lr());
            assert!((st.lr_at(50_000) - m.base_lr() / 10.0).abs() < 1e-20);
        }
    }
}
