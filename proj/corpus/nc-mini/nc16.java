public class Answer {
    public static int rotate(int n) {
        int state = 0;
        int visits = 0;
        for (int i = 0; i < n; i++) {
            switch (state) {
                case 0:
                    state = 1;
                    break;
                case 1:
                    state = 2;
                    break;
                default:
                    state = 0;
                    break;
            }
            visits = visits + 1;
        }
        return state + visits;
    }
}
