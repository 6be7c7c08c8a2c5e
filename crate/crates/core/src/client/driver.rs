use crate::protocol::{default_track_angles, ActionFrame, SensorFrame, Stage, TRACK_SENSORS};

/// What a bot implements. Only [`Driver::drive`] is required.
pub trait Driver {
    /// Range finder angles sent with the init, degrees in `[-90, 90]`.
    fn init_angles(&mut self) -> [f64; TRACK_SENSORS] {
        default_track_angles()
    }

    /// Called once per sensor frame; must return promptly.
    fn drive(&mut self, frame: &SensorFrame) -> ActionFrame;

    /// The run is over.
    fn on_shutdown(&mut self) {}

    /// The race was put back on the grid; a new episode follows.
    fn on_restart(&mut self) {}

    /// Stage and track name from the command line, before any other call.
    fn set_race_info(&mut self, _stage: Stage, _track_name: &str) {}
}

/// Hooks for logging and replay.
pub trait Observer {
    fn frame_received(&mut self, _frame: &SensorFrame) {}
    fn action_sent(&mut self, _action: &ActionFrame) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

/// Keeps every frame and action, in order.
#[derive(Debug, Clone, Default)]
pub struct Recorder {
    pub frames: Vec<SensorFrame>,
    pub actions: Vec<ActionFrame>,
}

impl Observer for Recorder {
    fn frame_received(&mut self, frame: &SensorFrame) {
        self.frames.push(frame.clone());
    }

    fn action_sent(&mut self, action: &ActionFrame) {
        self.actions.push(*action);
    }
}

/// Plays back a fixed list of actions, then repeats the last one.
#[derive(Debug, Clone)]
pub struct ScriptedDriver {
    actions: Vec<ActionFrame>,
    next: usize,
}

impl ScriptedDriver {
    pub fn new(actions: Vec<ActionFrame>) -> Self {
        Self { actions, next: 0 }
    }
}

impl Driver for ScriptedDriver {
    fn drive(&mut self, _frame: &SensorFrame) -> ActionFrame {
        let action = self
            .actions
            .get(self.next)
            .or(self.actions.last())
            .copied()
            .unwrap_or_default();
        self.next += 1;
        action
    }

    fn on_restart(&mut self) {
        self.next = 0;
    }
}
