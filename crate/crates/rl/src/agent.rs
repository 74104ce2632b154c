use std::collections::BTreeMap;

use ontodem_action::{
    action_concept_scores, hybrid_select, mask_actions, onto_distribution, prioritize_action, sample_index,
    ActionError, ActionSet, AlphaSchedule,
};
use ontodem_goal::{
    evaluate_change, select_or_generate_goal, state_similarity_reward, ChangeCase, GoalDecision, ObservationMatrix,
    RewardFn, RewardMachine, RmState, DEFAULT_EPSILON,
};
use ontodem_observation::{
    abstract_observation, augment_observation_with, concept_strata, expand_observation, mask_observation,
    sample_observation, ObservationHistory,
};
use ontodem_ontology::{extract_subsumer, ConceptId, ObservationSchema, TemporalContext};
use ontodem_rules::{forward_chain, FactBase, DEFAULT_MAX_ITERATIONS};

use crate::config::{AgentConfig, Algorithm, Method};
use crate::env::{Environment, Knowledge};
use crate::error::RlError;
use crate::qtable::{epsilon_distribution, multi_advisor_vote, q_learning_update, sarsa_update, QTable, StateKey};
use crate::report::{EpisodeReport, TransitionRecord};
use crate::stream::RngStreams;

/// Observation after the enabled pipeline methods ran.
#[derive(Clone, Debug)]
struct Processed {
    schema: ObservationSchema,
    key: StateKey,
}

#[derive(Clone, Debug)]
enum ActiveGoal {
    Problem,
    Generated,
    Predefined(Option<RewardFn>),
}

struct EpisodeState {
    history: ObservationHistory,
    goal: ActiveGoal,
    ctx: Option<TemporalContext>,
}

/// Tabular agent running the observation, reward and action stages of the
/// enabled methods around a Q-learning or SARSA learner.
///
/// Learners are kept per reward-machine state and, within a state, per
/// reward function (advisor). Without adaptive reward there is a single
/// learner.
#[derive(Clone, Debug)]
pub struct Agent {
    config: AgentConfig,
    actions: usize,
    tables: BTreeMap<(usize, usize), QTable>,
    blank: QTable,
    rm: RewardMachine,
    matrix: ObservationMatrix,
    alpha: AlphaSchedule,
    clock: u64,
    episode: usize,
}

impl Agent {
    pub fn new(config: AgentConfig, actions: usize) -> Result<Self, RlError> {
        config.validate()?;
        if actions == 0 {
            return Err(RlError::InvalidConfig("empty action set".into()));
        }
        Ok(Agent {
            rm: RewardMachine::new().with_max_states(config.rm_max_states),
            alpha: AlphaSchedule::new(config.alpha_window, config.alpha_unit),
            blank: QTable::new(actions, config.initial_q),
            tables: BTreeMap::new(),
            matrix: ObservationMatrix::new(),
            clock: 0,
            episode: 0,
            actions,
            config,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    /// Episodes completed so far.
    pub fn episodes_run(&self) -> usize {
        self.episode
    }

    /// Exploration rate of the next episode.
    pub fn epsilon(&self) -> f64 {
        self.config.epsilon_at(self.episode)
    }

    pub fn table(&self, rm_state: usize, advisor: usize) -> Option<&QTable> {
        self.tables.get(&(rm_state, advisor))
    }

    pub fn reward_machine(&self) -> &RewardMachine {
        &self.rm
    }

    /// Runs `episodes` episodes of at most `steps` steps each.
    pub fn run<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        knowledge: &Knowledge,
        streams: &mut RngStreams,
        episodes: usize,
        steps: usize,
    ) -> Result<Vec<EpisodeReport>, RlError> {
        (0..episodes).map(|_| self.run_episode(env, knowledge, streams, steps)).collect()
    }

    /// One episode: observe, run the observation methods, shape the reward,
    /// choose an action and learn, until `steps` steps or the environment
    /// reports done.
    pub fn run_episode<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        knowledge: &Knowledge,
        streams: &mut RngStreams,
        steps: usize,
    ) -> Result<EpisodeReport, RlError> {
        if env.actions().len() != self.actions {
            return Err(RlError::InvalidConfig(format!(
                "agent built for {} actions, environment has {}",
                self.actions,
                env.actions().len()
            )));
        }
        let epsilon = self.epsilon();
        self.rm.reset();
        env.reset(&mut streams.env);
        let mut ep = EpisodeState {
            history: ObservationHistory::new(self.config.pipeline.history_capacity),
            goal: ActiveGoal::Problem,
            ctx: None,
        };
        let raw = env.observe(&mut streams.noise);
        let mut cur = self.process(raw, env, knowledge, &mut ep, streams)?;
        let mut action = self.select(&cur, env.actions(), knowledge, streams, epsilon, &ep)?;
        let mut total = 0.0;
        let mut transitions = Vec::new();
        let mut taken = 0;
        for t in 0..steps {
            let outcome = env.step(action, &mut streams.env)?;
            if env.unforeseen_event() {
                self.alpha.record(self.clock);
            }
            let raw = env.observe(&mut streams.noise);
            let next = self.process(raw, env, knowledge, &mut ep, streams)?;
            let (reward, case) = self.shape_reward(outcome.reward, &cur, &next, action, knowledge, &mut ep)?;
            let rm_from = self.rm.current();
            if self.config.uses(Method::AdaptiveReward) {
                let subsumer = extract_subsumer(&next.schema, &knowledge.ontology)?;
                self.rm.update(&subsumer, &knowledge.ontology, &knowledge.reward_constraints);
            }
            let next_action = match self.config.algorithm {
                Algorithm::Sarsa => {
                    let a = self.select(&next, env.actions(), knowledge, streams, epsilon, &ep)?;
                    self.learn(rm_from, &cur, action, reward, &next, Some(a), outcome.done);
                    a
                }
                Algorithm::QLearning => {
                    self.learn(rm_from, &cur, action, reward, &next, None, outcome.done);
                    self.select(&next, env.actions(), knowledge, streams, epsilon, &ep)?
                }
            };
            total += reward;
            if self.config.record_transitions {
                transitions.push(TransitionRecord {
                    episode: self.episode,
                    step: t,
                    state: cur.key.to_string(),
                    action: env.actions().entries()[action].id.to_string(),
                    reward,
                    rm_state: rm_from.index(),
                    case: case.map(|c| format!("{c:?}")),
                });
            }
            self.clock += 1;
            taken = t + 1;
            cur = next;
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

    fn process<E: Environment + ?Sized>(
        &self,
        raw: ObservationSchema,
        env: &E,
        knowledge: &Knowledge,
        ep: &mut EpisodeState,
        streams: &mut RngStreams,
    ) -> Result<Processed, RlError> {
        let cfg = &self.config;
        if cfg.methods.is_empty() {
            let key = env.state_key(&raw);
            return Ok(Processed { schema: raw, key });
        }
        ep.ctx = env.temporal_context();
        let ctx = ep.ctx.as_ref();
        let onto = &knowledge.ontology;
        let class = env.class_key();
        let mut s =
            if cfg.uses(Method::Abstraction) { abstract_observation(&raw, &class, &ep.history) } else { raw.clone() };
        if cfg.uses(Method::Expansion) {
            s = expand_observation(&s, onto, &env.sensor_bindings());
        }
        if cfg.uses(Method::Augmentation) {
            s = augment_observation_with(&s, &knowledge.rules, cfg.pipeline.augment_mode)?;
        }
        if cfg.uses(Method::Masking) {
            if let Some(ao) = &knowledge.action_ontology {
                s = mask_observation(&s, onto, ao, cfg.pipeline.similarity_threshold)?;
            }
        }
        if cfg.uses(Method::Sampling) {
            s = sample_observation(&s, onto, ctx, cfg.pipeline.sample_size, &mut streams.sampling)?;
        }
        if cfg.uses(Method::Abstraction) {
            ep.history.push(raw, class);
        }
        let key = env.state_key(&s);
        Ok(Processed { schema: s, key })
    }

    fn shape_reward(
        &mut self,
        reward: f64,
        cur: &Processed,
        next: &Processed,
        action: usize,
        knowledge: &Knowledge,
        ep: &mut EpisodeState,
    ) -> Result<(f64, Option<ChangeCase>), RlError> {
        let mut r = reward;
        let mut case = None;
        let ctx = ep.ctx.as_ref();
        if let (true, Some(thresholds)) = (self.config.uses(Method::GoalSelection), &knowledge.thresholds) {
            let onto = &knowledge.ontology;
            let eval = evaluate_change(&cur.schema, &next.schema, reward, thresholds, &knowledge.valuation, onto, ctx)?;
            case = eval.case;
            match select_or_generate_goal(&eval, &next.schema, &knowledge.goals, onto, &knowledge.rules, ctx)? {
                GoalDecision::Keep => {}
                GoalDecision::Generated => ep.goal = ActiveGoal::Generated,
                GoalDecision::Predefined { reward_fn, .. } => {
                    ep.goal = ActiveGoal::Predefined(knowledge.goal_rewards.get(&reward_fn).cloned())
                }
            }
            r = match &ep.goal {
                ActiveGoal::Problem | ActiveGoal::Predefined(None) => reward,
                ActiveGoal::Generated => {
                    let similarity =
                        state_similarity_reward(&cur.schema, &next.schema, &knowledge.valuation, DEFAULT_EPSILON);
                    self.config.combiner.combine(reward, similarity, true)
                }
                ActiveGoal::Predefined(Some(f)) => f.evaluate(&next.schema),
            };
        }
        if self.config.uses(Method::RewardAugmentation) {
            self.matrix.record(action, &cur.schema, &next.schema);
            let weights = concept_weights(&next.schema, knowledge, ctx)?;
            r += self.matrix.efficiency(action, |c| weights.get(c).copied().unwrap_or(0.0));
        }
        Ok((r, case))
    }

    #[allow(clippy::too_many_arguments)]
    fn learn(
        &mut self,
        rm: RmState,
        cur: &Processed,
        action: usize,
        reward: f64,
        next: &Processed,
        next_action: Option<usize>,
        terminal: bool,
    ) {
        let fns: Vec<RewardFn> =
            if self.config.uses(Method::AdaptiveReward) { self.rm.reward_functions(rm).to_vec() } else { Vec::new() };
        let targets: Vec<f64> =
            if fns.is_empty() { vec![reward] } else { fns.iter().map(|f| reward + f.evaluate(&next.schema)).collect() };
        let (lr, gamma) = (self.config.learning_rate, self.config.discount);
        for (k, r) in targets.into_iter().enumerate() {
            let q = self.table_mut(rm.index(), k);
            match next_action {
                Some(a2) => sarsa_update(q, &cur.key, action, r, &next.key, a2, lr, gamma, terminal),
                None => q_learning_update(q, &cur.key, action, r, &next.key, lr, gamma, terminal),
            };
        }
    }

    fn select(
        &self,
        p: &Processed,
        actions: &ActionSet,
        knowledge: &Knowledge,
        streams: &mut RngStreams,
        epsilon: f64,
        ep: &EpisodeState,
    ) -> Result<usize, RlError> {
        let n = actions.len();
        let feasible = if self.config.uses(Method::ActionMasking) {
            feasible_actions(p, actions, knowledge)?
        } else {
            (0..n).collect()
        };
        let rm = self.rm.current();
        let advisors = self.advisors(rm);
        let greedy = if advisors.len() <= 1 {
            advisors.first().copied().unwrap_or(&self.blank).argmax(&p.key, &feasible)
        } else {
            multi_advisor_vote(&advisors, &p.key, &feasible)
        };
        let dist = epsilon_distribution(n, &feasible, greedy, epsilon);
        let mut choice = if self.config.uses(Method::Exploration) {
            let alpha = self.alpha.alpha(self.clock);
            let onto = self.onto_policy(p, actions, knowledge, &feasible, ep.ctx.as_ref())?;
            hybrid_select(&dist, onto.as_deref(), alpha, &mut streams.exploration)
        } else {
            sample_index(&dist, &mut streams.exploration)
        };
        if self.config.uses(Method::Prioritization) && choice == greedy {
            let q = advisors.first().copied().unwrap_or(&self.blank);
            let mut order = feasible.clone();
            order.sort_by(|&a, &b| q.get(&p.key, b).total_cmp(&q.get(&p.key, a)));
            let candidates = ActionSet::new(order.iter().map(|&a| actions.entries()[a].clone()).collect())?;
            let facts: FactBase = p.schema.to_facts().into_iter().collect();
            let id = prioritize_action(&candidates, &knowledge.action_rules, &facts)?;
            choice = actions.position(&id).expect("candidate drawn from the action set");
        }
        Ok(choice)
    }

    /// Learners of `rm`, one per reward function; empty when none exist yet.
    fn advisors(&self, rm: RmState) -> Vec<&QTable> {
        let count =
            if self.config.uses(Method::AdaptiveReward) { self.rm.reward_functions(rm).len().max(1) } else { 1 };
        (0..count).map(|k| self.tables.get(&(rm.index(), k)).unwrap_or(&self.blank)).collect()
    }

    fn onto_policy(
        &self,
        p: &Processed,
        actions: &ActionSet,
        knowledge: &Knowledge,
        feasible: &[usize],
        ctx: Option<&TemporalContext>,
    ) -> Result<Option<Vec<f64>>, RlError> {
        let mut facts: FactBase = p.schema.to_facts().into_iter().collect();
        facts.extend(actions.entries().iter().flat_map(|e| e.facts.iter().cloned()));
        let closure = if knowledge.action_rules.is_empty() {
            facts
        } else {
            forward_chain(&knowledge.action_rules, &facts, DEFAULT_MAX_ITERATIONS)?
        };
        let weights = concept_weights(&p.schema, knowledge, ctx)?;
        let mut scores = action_concept_scores(actions, &closure, &weights);
        for (a, s) in scores.iter_mut().enumerate() {
            if !feasible.contains(&a) {
                *s = 0.0;
            }
        }
        Ok(onto_distribution(&scores, self.config.onto_policy))
    }

    fn table_mut(&mut self, rm: usize, advisor: usize) -> &mut QTable {
        let (actions, initial) = (self.actions, self.config.initial_q);
        self.tables.entry((rm, advisor)).or_insert_with(|| QTable::new(actions, initial))
    }
}

fn feasible_actions(p: &Processed, actions: &ActionSet, knowledge: &Knowledge) -> Result<Vec<usize>, RlError> {
    let facts: FactBase = p.schema.to_facts().into_iter().collect();
    match mask_actions(actions, &facts, &knowledge.constraints, &knowledge.rules) {
        Ok(kept) => Ok(kept.ids().map(|id| actions.position(id).expect("masked set is a subset")).collect()),
        Err(ActionError::EmptyFeasibleSet) => Ok((0..actions.len()).collect()),
        Err(e) => Err(e.into()),
    }
}

fn concept_weights(
    schema: &ObservationSchema,
    knowledge: &Knowledge,
    ctx: Option<&TemporalContext>,
) -> Result<BTreeMap<ConceptId, f64>, RlError> {
    Ok(concept_strata(schema, &knowledge.ontology, ctx)?.into_iter().map(|s| (s.concept, s.weight)).collect())
}
