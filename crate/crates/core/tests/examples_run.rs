macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(companion);
example!(newton_basis);
example!(e1_linearization);
example!(general_ansatz);
example!(ansatz_transfer);
example!(delta_operators);
example!(spectrum);
example!(cli_files);
