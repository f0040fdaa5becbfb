use proptest::prelude::*;
use twt_cli::config::{parse_config_str, serialize_config};

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(
        m in 1usize..200,
        k in 1usize..10,
        v in 0.0f64..1e5,
        lambda in 0.0f64..10.0,
        epochs in 1usize..1000,
        seed in any::<u64>(),
        random in any::<bool>(),
        single in any::<bool>(),
        t_ms in 1u32..=4,
        seeds in prop::collection::vec(0u64..100, 1..4),
    ) {
        let text = format!(
            "num_stations = {m}\nk_capacity = {k}\nv = {v}\nlambda_files_per_s = {lambda}\n\
             num_epochs = {epochs}\nseed = {seed}\nalgorithm = {}\nsleep_semantics = {}\n\
             epoch_len_s = {}\nseeds = {}\n",
            if random { "random" } else { "jtwsa" },
            if single { "single_session" } else { "full_sleep" },
            t_ms as f64 * 0.5,
            seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
        );
        let cfg = parse_config_str(&text).unwrap();
        let again = parse_config_str(&serialize_config(&cfg)).unwrap();
        prop_assert_eq!(cfg, again);
    }
}
