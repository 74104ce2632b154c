use ontodem_action::sample_index;

use crate::config::{AgentConfig, Algorithm};
use crate::env::Environment;
use crate::error::RlError;
use crate::qtable::{epsilon_greedy, q_learning_update, sarsa_update, QTable};
use crate::report::{EpisodeReport, TransitionRecord};
use crate::stream::RngStreams;

/// Reference learner with no ontology methods: raw observation, problem
/// reward, epsilon-greedy over every action.
#[derive(Clone, Debug)]
pub struct PlainAgent {
    config: AgentConfig,
    table: QTable,
    episode: usize,
}

impl PlainAgent {
    pub fn new(config: AgentConfig, actions: usize) -> Result<Self, RlError> {
        config.validate()?;
        if actions == 0 {
            return Err(RlError::InvalidConfig("empty action set".into()));
        }
        Ok(PlainAgent { table: QTable::new(actions, config.initial_q), config, episode: 0 })
    }

    pub fn table(&self) -> &QTable {
        &self.table
    }

    pub fn run<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        streams: &mut RngStreams,
        episodes: usize,
        steps: usize,
    ) -> Result<Vec<EpisodeReport>, RlError> {
        (0..episodes).map(|_| self.run_episode(env, streams, steps)).collect()
    }

    pub fn run_episode<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        streams: &mut RngStreams,
        steps: usize,
    ) -> Result<EpisodeReport, RlError> {
        let all: Vec<usize> = (0..env.actions().len()).collect();
        let epsilon = self.config.epsilon_at(self.episode);
        let (lr, gamma) = (self.config.learning_rate, self.config.discount);
        env.reset(&mut streams.env);
        let raw = env.observe(&mut streams.noise);
        let mut state = env.state_key(&raw);
        let mut action = sample_index(&epsilon_greedy(&self.table, &state, &all, epsilon), &mut streams.exploration);
        let mut total = 0.0;
        let mut transitions = Vec::new();
        let mut taken = 0;
        for t in 0..steps {
            let outcome = env.step(action, &mut streams.env)?;
            let raw = env.observe(&mut streams.noise);
            let next = env.state_key(&raw);
            let q = &mut self.table;
            let next_action = match self.config.algorithm {
                Algorithm::Sarsa => {
                    let a = sample_index(&epsilon_greedy(q, &next, &all, epsilon), &mut streams.exploration);
                    sarsa_update(q, &state, action, outcome.reward, &next, a, lr, gamma, outcome.done);
                    a
                }
                Algorithm::QLearning => {
                    q_learning_update(q, &state, action, outcome.reward, &next, lr, gamma, outcome.done);
                    sample_index(&epsilon_greedy(q, &next, &all, epsilon), &mut streams.exploration)
                }
            };
            total += outcome.reward;
            if self.config.record_transitions {
                transitions.push(TransitionRecord {
                    episode: self.episode,
                    step: t,
                    state: state.to_string(),
                    action: env.actions().entries()[action].id.to_string(),
                    reward: outcome.reward,
                    rm_state: 0,
                    case: None,
                });
            }
            taken = t + 1;
            state = next;
            action = next_action;
            if outcome.done {
                break;
            }
        }
        let report = EpisodeReport {
            episode: self.episode,
            steps: taken,
            total_reward: total,
            epsilon,
            metrics: env.metrics(),
            transitions,
        };
        self.episode += 1;
        Ok(report)
    }
}
